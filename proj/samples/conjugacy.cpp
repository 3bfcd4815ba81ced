// Decide conjugacy of two words three ways and print a conjugator.
#include <thompson/dynamics.hpp>
#include <thompson/mather.hpp>
#include <thompson/normal_form.hpp>
#include <thompson/strand.hpp>
#include <thompson/tree_pair.hpp>

#include <iostream>
#include <string>

using namespace thompson;

int main(int argc, char** argv)
{
    Word y = parse_word(argc > 1 ? argv[1] : "x0 x1");
    Word z = parse_word(argc > 2 ? argv[2] : "x1 x0");
    PLMap fy = word_to_plmap(y), fz = word_to_plmap(z);

    std::cout << "y = " << to_string(normal_form(y)) << "\nz = " << to_string(normal_form(z)) << '\n';
    std::cout << "strand diagrams: " << (conjugate_strand(y, z) ? "conjugate" : "not conjugate") << '\n';
    auto g = conjugate_pl(fy, fz);
    std::cout << "stair algorithm: " << (g ? "conjugate" : "not conjugate") << '\n';
    std::string mather = "not applicable (not one-bump)";
    try {
        mather = mather_conjugate(fy, fz) ? "conjugate" : "not conjugate";
    } catch (const std::invalid_argument&) {
    }
    std::cout << "Mather invariant: " << mather << '\n';
    if (g) {
        Word gw = word_from_plmap(*g);
        std::cout << "g = " << to_string(gw) << "\ng^-1 y g == z: " << std::boolalpha << word_equal(inverse(gw) * y * gw, z)
                  << '\n';
    }
}
