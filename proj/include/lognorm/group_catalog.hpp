#pragma once

// Every group of order at most 16 up to isomorphism (42 of them), plus a few
// larger test groups.

#include "lognorm/groups.hpp"

#include <vector>

namespace lognorm::groups {

namespace detail {

inline FiniteGroup named(FiniteGroup g, std::string name)
{
    g.set_name(std::move(name));
    return g;
}

/// C_n semidirect C_m with the generator acting by x -> x^r.
inline FiniteGroup metacyclic(int n, int m, int r, std::string name)
{
    FiniteGroup c = cyclic_group(n);
    std::vector<int> phi(n);
    for (int x = 0; x < n; ++x)
        phi[x] = x * r % n;
    return semidirect_product(c, m, phi, std::move(name));
}

}  // namespace detail

inline std::vector<FiniteGroup> groups_of_order(int n)
{
    using detail::metacyclic;
    using detail::named;
    auto C = cyclic_group;
    switch (n) {
    case 1:
    case 2:
    case 3:
    case 5:
    case 7:
    case 11:
    case 13:
        return {C(n)};
    case 4:
        return {C(4), named(direct_product(C(2), C(2)), "C2xC2")};
    case 6:
        return {C(6), named(dihedral_group(3), "S3")};
    case 8:
        return {C(8), direct_product(C(4), C(2)), named(direct_product(direct_product(C(2), C(2)), C(2)), "C2^3"),
                named(dihedral_group(4), "D4"), dicyclic_group(2)};
    case 9:
        return {C(9), direct_product(C(3), C(3))};
    case 10:
        return {C(10), dihedral_group(5)};
    case 12:
        return {C(12), direct_product(C(6), C(2)), dihedral_group(6), alternating_group(4), dicyclic_group(3)};
    case 14:
        return {C(14), dihedral_group(7)};
    case 15:
        return {C(15)};
    case 16: {
        FiniteGroup v4 = direct_product(C(2), C(2));
        // v4 elements: a = 2, b = 1; a -> ab, b -> b.
        std::vector<int> swap_a = automorphism_from_images(v4, {2, 1}, {3, 1});
        FiniteGroup c4c2 = direct_product(C(4), C(2));
        // c4c2 elements: a = 2 (order 4), b = 1; a -> a, b -> a^2 b.
        std::vector<int> central = automorphism_from_images(c4c2, {2, 1}, {2, 5});
        return {
            C(16),
            direct_product(C(4), C(4)),
            semidirect_product(v4, 4, swap_a, "C2^2:C4"),
            metacyclic(4, 4, 3, "C4:C4"),
            direct_product(C(8), C(2)),
            metacyclic(8, 2, 5, "M16"),
            named(dihedral_group(8), "D8"),
            metacyclic(8, 2, 3, "SD16"),
            named(dicyclic_group(4), "Q16"),
            named(direct_product(C(4), direct_product(C(2), C(2))), "C4xC2^2"),
            named(direct_product(C(2), dihedral_group(4)), "C2xD4"),
            named(direct_product(C(2), dicyclic_group(2)), "C2xQ8"),
            semidirect_product(c4c2, 2, central, "C4oD4"),
            named(direct_product(direct_product(C(2), C(2)), direct_product(C(2), C(2))), "C2^4"),
        };
    }
    default:
        throw std::invalid_argument("groups_of_order: only orders up to 16 are catalogued");
    }
}

inline std::vector<FiniteGroup> groups_up_to_order(int max_order)
{
    std::vector<FiniteGroup> out;
    for (int n = 1; n <= max_order; ++n)
        for (auto& g : groups_of_order(n))
            out.push_back(std::move(g));
    return out;
}

}  // namespace lognorm::groups
