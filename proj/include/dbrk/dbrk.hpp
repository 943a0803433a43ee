#pragma once

// Umbrella header.

#include "dbrk/analytic.hpp"
#include "dbrk/combinatorics.hpp"
#include "dbrk/config.hpp"
#include "dbrk/errors.hpp"
#include "dbrk/experiments.hpp"
#include "dbrk/field.hpp"
#include "dbrk/gamma_ratio.hpp"
#include "dbrk/gaussian_rational.hpp"
#include "dbrk/hypergeometric.hpp"
#include "dbrk/kernels.hpp"
#include "dbrk/quadrature.hpp"
#include "dbrk/rational.hpp"
#include "dbrk/representation.hpp"
