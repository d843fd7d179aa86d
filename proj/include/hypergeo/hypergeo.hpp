#pragma once

#include "hypergeo/bounds.hpp"
#include "hypergeo/distributions.hpp"
#include "hypergeo/divergence.hpp"
#include "hypergeo/exact.hpp"
#include "hypergeo/kravchuk.hpp"
#include "hypergeo/phi.hpp"
#include "hypergeo/report.hpp"
#include "hypergeo/verification.hpp"
