#pragma once

#include <cstdint>
#include <string>

#include "dghom/instance.hpp"

namespace dghom {

// Size bounds for generated instances. Coefficients are drawn from
// [-coeff_pool, coeff_pool].
struct Profile {
    std::string name;
    int max_base_gens = 1;
    int max_ext_gens = 2;
    int max_gen_degree = 3;
    int max_basis = 3;
    int max_basis_degree = 4;
    int coeff_pool = 2;
    bool with_derivation = true;
    bool mixed_fields = true; // occasionally emit F_p instances
};

// tiny, small, medium; throws std::invalid_argument on an unknown name
Profile profile_by_name(const std::string& name);

// Deterministic in (seed, profile). Differentials are sampled from the cycle
// subspace of the partially built algebra/module, so d^2 = 0 and the
// triangularity invariants hold by construction and every emitted document
// validates.
InstanceDocument generate_random_instance(std::uint64_t seed, const Profile& profile);

} // namespace dghom
