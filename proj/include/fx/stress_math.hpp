#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "fx/dsp_core.hpp"

namespace fx {

using Complex = std::complex<double>;

// Residue decomposition of the stress family on its delay lattice:
// h[k D] = dc_residue + osc_residue * pole^k + conj(osc_residue) * conj(pole)^k.
struct PartialFractions {
    double dc_residue = 0.0;  // residue at the real pole w = 1
    Complex osc_residue;      // residue at `osc_pole`; its conjugate pairs with conj(osc_pole)
    Complex osc_pole;         // unit-magnitude pole, positive imaginary part

    // Triangle-inequality bound on |h|.
    double amplitude_bound() const { return dc_residue + 2.0 * std::abs(osc_residue); }
};

// True iff alpha^(n+1) equals alpha within 1e-12.
bool root_of_unity_check(Complex alpha, unsigned n);

// Expansion of (1 - w)(1 + (1+g) w + w^2) with w = z^(-D):
// taps (0, 1), (D, g), (2D, -g), (3D, -1).
std::vector<SparseTap> stress_denominator(double g, std::size_t delay);

// Conjugate roots of w^2 + (1+g) w + 1 = 0; both on the unit circle for
// g in (0, 1). Returns (pole, conj(pole)) with the positive-imaginary one
// first. Throws ConfigError when the roots would be real (g outside (0,1)).
std::pair<Complex, Complex> stress_poles(double g);

// Numerator coefficients of the three-residue recombination over the common
// denominator, ordered by power of z^-1:
//   { A+B+C,
//     -(A (a+a*) + (B+C) + (B a* + C a)),
//     A + B a* + C a }.
std::array<Complex, 3> stress_numerator_coeffs(double dc, Complex b, Complex c,
                                               Complex pole);

struct ReductionCheck {
    double ratio;     // z^-1 over z^0 numerator coefficient
    double residual;  // magnitude of the z^-2 coefficient, zero when reducible
};

// Applies the simplification constraints (equal conjugate residues, dc
// residue -(a+a*) times them) and evaluates the numerator: the quadratic
// term must vanish and the remaining tap ratio equals g.
ReductionCheck numerator_reduction_check(double g);

// Residues of H(w) = K (1 + g w) / [(1 - w)(1 - pole*w)(1 - conj(pole) w)]
// on the delay lattice. dc_residue = K (1+g) / (3+g).
PartialFractions partial_fractions(double output_gain, double feedback_gain);

// h[k D] from the residue form; real by conjugate symmetry.
double closed_form_ir(const PartialFractions& pf, std::size_t k);

// Max over k <= terms of |closed-form - direct recursion| at lags k*D,
// folded with the magnitude of every off-lattice sample (all must be zero).
double verify_closed_form(double output_gain, double feedback_gain,
                          std::size_t delay, std::size_t terms);

}  // namespace fx
