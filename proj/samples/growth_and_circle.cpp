// Sphere sizes of F in {x0, x1}, and finite-order PL circle maps.
#include <thompson/circle.hpp>
#include <thompson/growth.hpp>

#include <iostream>

using namespace thompson;

int main()
{
    auto spheres = sphere_count_recursive(14);
    for (std::size_t n = 0; n < spheres.size(); ++n)
        std::cout << "|S(" << n << ")| = " << spheres[n] << '\n';

    std::cout << "length of x0 x1^-1 x2 x1: " << length(expand_to_x0x1(parse_word("x0 x1^-1 x2 x1"))) << '\n';

    for (long n = 2; n <= 5; ++n) {
        CircleMap c = construct_torsion(n);
        RotationResult r = rotation_number(c);
        std::cout << "construct_torsion(" << n << "): order " << *is_torsion(c) << ", rotation number " << r.value << '\n';
    }
}
