#pragma once

// Umbrella header: factorization of polynomial Lienard equations into nested
// first-order operators, closed-form Riccati solution families, and the
// numerical verification oracles plus the command line front end.

#include "riccfam/cli.hpp"
#include "riccfam/curve.hpp"
#include "riccfam/dual.hpp"
#include "riccfam/errors.hpp"
#include "riccfam/factorize.hpp"
#include "riccfam/families.hpp"
#include "riccfam/integrate.hpp"
#include "riccfam/lienard.hpp"
#include "riccfam/polynomial.hpp"
#include "riccfam/quadrature.hpp"
#include "riccfam/riccati.hpp"
#include "riccfam/rootfind.hpp"
#include "riccfam/verify.hpp"
