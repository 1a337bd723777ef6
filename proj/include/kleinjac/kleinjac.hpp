#pragma once

// Jacobian-theoretic computations on imaginary real hyperelliptic curves and
// their Klein-surface quotients: divisor calculus, sigma-adapted homology,
// period matrices, the Abel-Jacobi map, and the fixed locus of conjugation.

#include "kleinjac/cli.hpp"
#include "kleinjac/config.hpp"
#include "kleinjac/curve.hpp"
#include "kleinjac/divisor.hpp"
#include "kleinjac/errors.hpp"
#include "kleinjac/homology.hpp"
#include "kleinjac/intmatrix.hpp"
#include "kleinjac/jacobian.hpp"
#include "kleinjac/path.hpp"
#include "kleinjac/periods.hpp"
#include "kleinjac/principality.hpp"
#include "kleinjac/quadrature.hpp"
#include "kleinjac/rational.hpp"
#include "kleinjac/serialize.hpp"
