#pragma once

// Umbrella header for the whole library.

#include "jacreg/common.hpp"
#include "jacreg/csv.hpp"
#include "jacreg/estimator.hpp"
#include "jacreg/experiments.hpp"
#include "jacreg/gram.hpp"
#include "jacreg/jacobi.hpp"
#include "jacreg/matrix.hpp"
#include "jacreg/parallel.hpp"
#include "jacreg/quadrature.hpp"
#include "jacreg/sampling.hpp"
#include "jacreg/shepard.hpp"
#include "jacreg/tensor_basis.hpp"
