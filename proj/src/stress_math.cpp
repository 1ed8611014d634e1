#include "fx/stress_math.hpp"

#include <cmath>

#include "fx/effects.hpp"

namespace fx {

bool root_of_unity_check(Complex alpha, unsigned n) {
    const Complex power = std::pow(alpha, static_cast<double>(n + 1));
    return std::abs(power - alpha) <= 1e-12;
}

std::vector<SparseTap> stress_denominator(double g, std::size_t delay) {
    if (!(g > 0.0 && g < 1.0)) throw ConfigError("feedback gain must lie in (0, 1)");
    if (delay == 0) throw ConfigError("delay must be >= 1 sample");
    return {{0, 1.0}, {delay, g}, {2 * delay, -g}, {3 * delay, -1.0}};
}

std::pair<Complex, Complex> stress_poles(double g) {
    const double sum = 1.0 + g;  // -(pole + conj(pole))
    const double disc = 4.0 - sum * sum;
    if (!(g > 0.0) || !(disc > 0.0))
        throw ConfigError(
            "feedback gain must lie in (0, 1); at g >= 1 the conjugate pair "
            "degenerates into real roots");
    const Complex pole(-sum / 2.0, std::sqrt(disc) / 2.0);
    return {pole, std::conj(pole)};
}

std::array<Complex, 3> stress_numerator_coeffs(double dc, Complex b, Complex c,
                                               Complex pole) {
    const Complex conj_pole = std::conj(pole);
    const Complex pair_sum = pole + conj_pole;
    return {
        dc + b + c,
        -(dc * pair_sum + (b + c) + (b * conj_pole + c * pole)),
        dc + b * conj_pole + c * pole,
    };
}

ReductionCheck numerator_reduction_check(double g) {
    const auto [pole, conj_pole] = stress_poles(g);
    // Equal conjugate residues force the quadratic term to zero; the dc
    // residue then equals -(pole + conj(pole)) = (1 + g) times them.
    const Complex b{1.0, 0.0};
    const double dc = (1.0 + g) * b.real();
    const auto coeffs = stress_numerator_coeffs(dc, b, b, pole);
    return {(coeffs[1] / coeffs[0]).real(), std::abs(coeffs[2])};
}

PartialFractions partial_fractions(double output_gain, double feedback_gain) {
    const auto [pole, conj_pole] = stress_poles(feedback_gain);
    const double k = output_gain;
    const double g = feedback_gain;

    PartialFractions pf;
    pf.osc_pole = pole;
    pf.dc_residue = k * (1.0 + g) / (3.0 + g);
    // Residue of K (1 + g w) / [(1 - w)(1 - pole w)(1 - conj(pole) w)] at
    // w = 1/pole = conj(pole).
    pf.osc_residue = k * (1.0 + g * conj_pole) /
                     ((1.0 - conj_pole) * (1.0 - conj_pole * conj_pole));
    return pf;
}

double closed_form_ir(const PartialFractions& pf, std::size_t k) {
    const Complex term = pf.osc_residue * std::pow(pf.osc_pole, static_cast<double>(k));
    return pf.dc_residue + 2.0 * term.real();
}

double verify_closed_form(double output_gain, double feedback_gain, std::size_t delay,
                          std::size_t terms) {
    if (terms == 0) throw ConfigError("need at least one term");
    const SparseRationalTF tf = make_stress_generator(
        {.output_gain = output_gain, .feedback_gain = feedback_gain, .delay = delay});
    const std::vector<Sample> h = impulse_response(tf, terms * delay + 1);
    const PartialFractions pf = partial_fractions(output_gain, feedback_gain);

    double max_err = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        const double expected = n % delay == 0 ? closed_form_ir(pf, n / delay) : 0.0;
        max_err = std::max(max_err, std::abs(h[n] - expected));
    }
    return max_err;
}

}  // namespace fx
