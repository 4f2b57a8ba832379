#pragma once

#include <vector>

#include "jkoflow/grid.hpp"
#include "jkoflow/kernel.hpp"
#include "jkoflow/model.hpp"
#include "jkoflow/test_functions.hpp"

namespace jkoflow {

/// int phi rho.
double pairing(const GridDensity& rho, const BumpFunction& phi);
/// int rho grad Phi'(rho) . grad phi, in pressure form -int P(rho) phi''.
double pressure_term(const GridDensity& rho, const BumpFunction& phi, const ModelSpec& spec);
/// (1/2) int int K'(x - y) (phi'(x) - phi'(y)) rho(x) rho(y).
double interaction_term_symmetric(const GridDensity& rho, const BumpFunction& phi,
                                  const KernelTable& tab);
/// int rho phi' (K' * rho); equal to the symmetric form by oddness of K'.
double interaction_term(const GridDensity& rho, const BumpFunction& phi,
                        const ScalarField& grad_k_rho);
/// int rho phi' (K' * 1_S).
double support_term(const GridDensity& rho, const BumpFunction& phi,
                    const IndicatorPotential& potential);
/// int M(rho) phi.
double reaction_term(const GridDensity& rho, const BumpFunction& phi, const ModelSpec& spec);

}  // namespace jkoflow
