#pragma once

// Polynomial data of the diagonal recurrences, the WM summand polynomial V,
// and the explicit closed-form displays used as oracles.

#include <initializer_list>
#include <vector>

#include "bipoly.hpp"
#include "exact_scalar.hpp"
#include "spectrum.hpp"

namespace rf {

namespace detail {

// Integer polynomial in d, ascending coefficients.
inline Rational dp(long d, std::initializer_list<long> c) {
    Rational r = 0;
    for (auto it = std::rbegin(c); it != std::rend(c); ++it) r = r * d + *it;
    return r;
}

inline Poly poly_in_m(std::vector<Rational> c) { return Poly(std::move(c)); }

}  // namespace detail

using detail::dp;
using detail::poly_in_m;

// Two-step recurrence P f_m - Q f_{m+1} + R f_{m+2} = 0 for f_m = C_00mm / omega_m^2.
inline Poly kg_P(long d) {
    return poly_in_m({
        dp(d, {0, 0, -126, 48, 354, 108}),
        dp(d, {0, -378, -492, 2042, 2564, 552}),
        dp(d, {-252, -1812, 2842, 11696, 7306, 1052}),
        dp(d, {-1272, -458, 19896, 28378, 10448, 944}),
        dp(d, {-1612, 12928, 46680, 35820, 7912, 400}),
        dp(d, {2272, 33872, 55480, 24584, 3008, 64}),
        dp(d, {8816, 39808, 35824, 8656, 448}),
        dp(d, {10752, 24800, 11936, 1216}),
        dp(d, {6592, 7936, 1600}),
        dp(d, {2048, 1024}),
        dp(d, {256})});
}

inline Poly kg_Q(long d) {
    return poly_in_m({
        dp(d, {-120, -284, 1478, 5287, 6986, 5086, 1988, 315}),
        dp(d, {-800, 1784, 22232, 47402, 46420, 24570, 6428, 572}),
        dp(d, {-624, 26596, 112146, 165840, 119410, 44244, 7252, 336}),
        dp(d, {8736, 108176, 282112, 299360, 153664, 37360, 3424, 64}),
        dp(d, {35912, 225952, 405056, 304592, 104920, 14864, 576}),
        dp(d, {68160, 278432, 347200, 175872, 36160, 2240}),
        dp(d, {75872, 210368, 175488, 53568, 4928}),
        dp(d, {52224, 95744, 48128, 6656}),
        dp(d, {21888, 24064, 5504}),
        dp(d, {5120, 2560}),
        dp(d, {512})});
}

inline Poly kg_R(long d) {
    return poly_in_m({
        dp(d, {-240, -220, 3800, 12640, 16920, 11180, 3520, 400}),
        dp(d, {-976, 6922, 48460, 100176, 95748, 45022, 9568, 680}),
        dp(d, {2228, 58224, 210336, 303628, 208412, 68100, 9344, 368}),
        dp(d, {21912, 187418, 454024, 469382, 226608, 48832, 3872, 64}),
        dp(d, {60212, 324160, 556520, 406340, 130992, 16672, 576}),
        dp(d, {89184, 334544, 405384, 199032, 38400, 2176}),
        dp(d, {80496, 212288, 173584, 51440, 4480}),
        dp(d, {45568, 81184, 40288, 5440}),
        dp(d, {15808, 17152, 3904}),
        dp(d, {3072, 1536}),
        dp(d, {256})});
}

inline Poly wm_P(long d) {
    return poly_in_m({
        dp(d, {440, 648, 342, 76, 6}),
        dp(d, {2776, 3694, 1757, 352, 25}),
        dp(d, {7190, 8395, 3457, 591, 35}),
        dp(d, {10080, 10003, 3404, 461, 20}),
        dp(d, {8418, 6808, 1792, 170, 4}),
        dp(d, {4308, 2662, 482, 24}),
        dp(d, {1324, 556, 52}),
        dp(d, {224, 48}),
        dp(d, {16})});
}

inline Poly wm_Q(long d) {
    return poly_in_m({
        dp(d, {3904, 6032, 4156, 1655, 397, 53, 3}),
        dp(d, {19584, 28464, 18216, 6609, 1414, 165, 8}),
        dp(d, {40544, 53028, 29725, 9098, 1559, 134, 4}),
        dp(d, {45984, 52008, 24192, 5772, 692, 32}),
        dp(d, {31540, 29416, 10570, 1734, 108}),
        dp(d, {13472, 9672, 2376, 200}),
        dp(d, {3512, 1720, 216}),
        dp(d, {512, 128}),
        dp(d, {32})});
}

inline Poly wm_R(long d) {
    return poly_in_m({
        dp(d, {4536, 8856, 7074, 2958, 682, 82, 4}),
        dp(d, {20952, 37638, 27513, 10457, 2173, 233, 10}),
        dp(d, {39510, 62631, 39524, 12551, 2068, 160, 4}),
        dp(d, {40512, 54517, 28140, 6887, 784, 32}),
        dp(d, {24978, 27228, 10702, 1780, 104}),
        dp(d, {9548, 7874, 2086, 176}),
        dp(d, {2220, 1228, 164}),
        dp(d, {288, 80}),
        dp(d, {16})});
}

inline BiPoly wm_V(long d) {
    return BiPoly(std::vector<Poly>{
        poly_in_m({dp(d, {0, 0, 12, 24, 12}), dp(d, {0, 24, 88, 84, 20}), dp(d, {0, 74, 145, 70, -1}), dp(d, {0, 72, 80, 0, -8}), dp(d, {0, 22, 11, -10, 1})}),
        poly_in_m({dp(d, {0, -24, -80, -72, -16}), dp(d, {-24, -184, -274, -70, 28}), dp(d, {-88, -316, -150, 122, 36}), dp(d, {-96, -156, 92, 80, -8}), dp(d, {-32, -8, 48, -8})}),
        poly_in_m({dp(d, {12, 66, 46, -56, -40}), dp(d, {76, 136, -210, -302, -48}), dp(d, {100, -126, -528, -162, 24}), dp(d, {16, -260, -192, 52}), dp(d, {-16, -72, 24})}),
        poly_in_m({dp(d, {-16, 14, 152, 128, 16}), dp(d, {-4, 312, 488, 80, -32}), dp(d, {112, 500, 156, -120}), dp(d, {128, 136, -120}), dp(d, {32, -32})}),
        poly_in_m({dp(d, {-11, -100, -106, 8, 16}), dp(d, {-96, -244, 36, 112}), dp(d, {-124, 6, 198}), dp(d, {-16, 112}), dp(d, {16})}),
        poly_in_m({dp(d, {20, 30, -36, -32}), dp(d, {36, -72, -120}), dp(d, {-24, -120}), dp(d, {-32})}),
        poly_in_m({dp(d, {-2, 22, 24}), dp(d, {20, 52}), dp(d, {24})}),
        poly_in_m({dp(d, {-4, -8}), dp(d, {-8})}),
        poly_in_m({dp(d, {1})})});
}

inline std::vector<Rational> kg_sign_coeffs(long d) {
    return {
        dp(d, {120, -64, -2196, -7401, -10288, -6202, -1532, -85}),
        dp(d, {176, -4760, -25736, -54816, -51892, -21004, -3140, -108}),
        dp(d, {-2600, -29816, -101032, -149484, -96308, -24908, -2092, -32}),
        dp(d, {-11904, -78784, -191808, -198400, -83392, -12416, -448}),
        dp(d, {-22688, -111136, -198144, -137568, -33984, -2208}),
        dp(d, {-23296, -89984, -113664, -47744, -5248}),
        dp(d, {-13440, -41728, -33920, -6528}),
        dp(d, {-4096, -10240, -4096}),
        dp(d, {-512, -1024})};
}

inline std::vector<Rational> wm_sign_coeffs(long d) {
    return {
        dp(d, {1072, 3472, 3260, 1379, 291, 29, 1}),
        dp(d, {4144, 12868, 11054, 4200, 784, 68, 2}),
        dp(d, {6156, 17998, 13256, 4044, 544, 26}),
        dp(d, {4608, 12512, 7352, 1576, 112}),
        dp(d, {1856, 4620, 1924, 216}),
        dp(d, {384, 864, 192}),
        dp(d, {32, 64})};
}

// x_1 = f_2 / f_1 displays.
inline Rational kg_x1_closed(long d) {
    return dp(d, {-24, -52, -78, 111, 196, 63}) / dp(d, {-48, -236, -136, 492, 448, 80});
}
inline Rational wm_x1_closed(long d) {
    return dp(d, {560, 708, 482, 189, 38, 3}) / dp(d, {840, 1472, 1038, 364, 62, 4});
}

// Closed C_00mm formulas for small delta; WM forms are stated for m >= delta - 1.
inline bool has_diag_display(Model model, long d) {
    return model == Model::KG ? (d >= 2 && d <= 5) : (d >= 1 && d <= 4);
}

inline ExactScalar diag_display(Model model, long d, long m) {
    const ExactScalar inv_pi = ExactScalar::pi_power(-2);
    Rational x = m;
    if (model == Model::KG) {
        switch (d) {
            case 2: return ExactScalar(8) * inv_pi;
            case 3: return ExactScalar(4 * (3 * x * (x + 3) + 7) / ((x + 1) * (x + 2))) * inv_pi;
            case 4:
                return ExactScalar(16 * (x * (x + 4) * (20 * x * (x + 4) + 153) + 297) /
                                   (5 * (x + 1) * (x + 3) * (2 * x + 3) * (2 * x + 5))) * inv_pi;
            case 5:
                return ExactScalar(20 * (x * (x + 5) * (x * (x + 5) * (28 * x * (x + 5) + 475) + 2694) + 5148) /
                                   (7 * (x + 1) * (x + 2) * (x + 3) * (x + 4) * (2 * x + 3) * (2 * x + 7))) * inv_pi;
            default: break;
        }
    } else {
        switch (d) {
            case 1: return ExactScalar(18 * (x * x + 3 * x + 1) / (4 * x * x + 12 * x + 5));
            case 2:
                return ExactScalar(12 * (x * (x + 4) * (2 * x * (x + 4) + 17) + 18) /
                                   ((2 * x + 1) * (2 * x + 3) * (2 * x + 5) * (2 * x + 7)));
            case 3:
                return ExactScalar(5 * (x * (x + 5) * (x * (x + 5) * (3 * x * (x + 5) + 50) + 312) + 360) /
                                   ((x + 2) * (x + 3) * (2 * x + 1) * (2 * x + 3) * (2 * x + 7) * (2 * x + 9)));
            case 4:
                return ExactScalar(45 * (x * (x + 6) * (x * (x + 6) * (x * (x + 6) * (2 * x * (x + 6) + 61) + 703) + 4004) + 5040) /
                                   (2 * (x + 2) * (x + 4) * (2 * x + 1) * (2 * x + 3) * (2 * x + 5) * (2 * x + 7) * (2 * x + 9) * (2 * x + 11)));
            default: break;
        }
    }
    throw ValidationError("no closed display for this delta");
}

// Gap at m = 1, KG: (2d-1) U1 / ((d+2)(2d+1)) * pi Gamma(4d-3) / (2^(8d-7) Gamma(d-1/2) Gamma(d+1/2)^3).
inline long kg_U1(long d) { return -d * d * d + 10 * d * d - 2; }

inline ExactScalar kg_gap1_display(long d) {
    ExactScalar pre(make_rational((2 * d - 1) * kg_U1(d), (d + 2) * (2 * d + 1)));
    Integer two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(8 * d - 7));
    ExactScalar g = ExactScalar::pi_power(2) * gamma_exact(2 * (4 * d - 3)) /
                    (ExactScalar(Rational(two_pow)) * gamma_exact(2 * d - 1) * gamma_exact(2 * d + 1).pow(3));
    return pre * g;
}

inline Rational wm_gap1_display(long d) { return make_rational(9 * d + 21, 8 * d * d * d * d + 68 * d * d * d + 190 * d * d + 199 * d + 60); }

// kappa_0 closed forms.
inline ExactScalar kappa0_closed_sq(Model model, long d) {
    if (model == Model::WM) {
        return ExactScalar(make_rational(4 * 2 * d * (d + 1) * (2 * d + 1) * (2 * d + 3), 9 * (d + 1) * (d + 1)));
    }
    Integer four_pow;
    mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(d));
    ExactScalar g = gamma_exact(2 * d - 1);
    return ExactScalar(Rational(four_pow)) * g * g * gamma_exact(2 * d + 1) /
           (ExactScalar(3) * gamma_exact(2 * d) * gamma_exact(4 * d - 3));
}

}  // namespace rf
