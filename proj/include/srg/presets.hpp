#pragma once

#include <cstdint>

#include "srg/kernels.hpp"

namespace srg {

// Free family plus the single-boson coupling g * w^{-(1-mu)/2} on the
// creation/annihilation kernels w10 and w01 (Hermitian pairing at real z).
KernelFamily coupling_family(std::shared_ptr<const Grids> grids, double g, int m_max = 2);

// Deterministic pseudo-random family inside the polydisc at the given triple:
// w00 = z + r plus a free-part perturbation below eps_F, interaction kernels
// scaled so the interaction norm lands at fill * eps_I. Canonical on return.
KernelFamily random_polydisc_family(std::shared_ptr<const Grids> grids, const EpsilonTriple& eps,
                                    std::uint64_t seed, double fill = 0.9, int m_max = 2);

} // namespace srg
