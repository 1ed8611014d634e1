#include "fx/report.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "fx/stress_math.hpp"

namespace fx {

namespace {

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

void print_taps(std::ostringstream& out, const char* label,
                const std::vector<SparseTap>& taps) {
    out << "  " << label << ":";
    for (const auto& tap : taps) out << fmt("  z^-%zu * %.6g", tap.lag, tap.coeff);
    out << "\n";
}

void print_stability(std::ostringstream& out, const SparseRationalTF& tf) {
    const StabilityReport report = analyze_stability(tf);
    if (report.classification == Stability::Fir) {
        out << "  poles: none (finite impulse response)\n";
        out << "  classification: fir\n";
        return;
    }
    out << fmt("  poles in w = z^%zu:\n", report.reduced_lag_gcd);
    for (std::size_t i = 0; i < report.poles.size(); ++i)
        out << fmt("    w = %+.6f %+.6fj   |w| = %.9f\n", report.poles[i].real(),
                   report.poles[i].imag(), report.pole_magnitudes[i]);
    out << "  classification: " << to_string(report.classification);
    if (!report.converged) out << " (root finding did not converge; partial results)";
    out << "\n";
}

void print_stress_residues(std::ostringstream& out, const StressParams& p) {
    const PartialFractions pf =
        partial_fractions(p.output_gain, p.feedback_gain);
    const double k = p.output_gain;
    const double g = p.feedback_gain;
    out << fmt("  oscillating pole: %+.6f %+.6fj (conjugate pair, magnitude %.9f)\n",
               pf.osc_pole.real(), pf.osc_pole.imag(), std::abs(pf.osc_pole));
    out << fmt("  residues: A = K(1+g)/(3+g) = %.5f\n", pf.dc_residue);
    out << fmt("            B = %+.6f %+.6fj, C = conj(B)\n", pf.osc_residue.real(),
               pf.osc_residue.imag());
    out << fmt("            amplitude bound A + 2|B| = %.6f\n", pf.amplitude_bound());
    const double err = verify_closed_form(k, g, 1, 2000);
    out << fmt("  closed form vs direct recursion over 2000 lattice terms: "
               "max error %.3g\n",
               err);
    out << fmt("  note: the undivided product K(1+g) = %.2f is sometimes quoted for\n"
               "  the dc residue; the recursion confirms A = K(1+g)/(3+g) = %.5f,\n"
               "  smaller by the factor (3+g).\n",
               k * (1.0 + g), pf.dc_residue);
}

void analyze_node(std::ostringstream& out, const SparseRationalTF& tf) {
    out << "  node: " << (tf.name.empty() ? "(unnamed)" : tf.name) << "\n";
    print_taps(out, "numerator  ", tf.numerator);
    print_taps(out, "denominator", tf.denominator);
    print_stability(out, tf);
}

void analyze_chain(std::ostringstream& out, const SeriesChain& chain);

void analyze_element(std::ostringstream& out, const GraphElement& el) {
    if (const auto* node = std::get_if<FilterNode>(&el.node)) {
        analyze_node(out, node->tf);
        return;
    }
    const auto& group = std::get<ParallelGroup>(el.node);
    out << "  parallel group, " << group.paths.size() << " summed paths\n";
    for (const auto& path : group.paths) analyze_chain(out, path);
}

void analyze_chain(std::ostringstream& out, const SeriesChain& chain) {
    for (const auto& el : chain.elements) analyze_element(out, el);
}

}  // namespace

std::string chain_analysis_report(const ChainConfig& cfg) {
    std::ostringstream out;
    out << "rate " << cfg.sample_rate_hz << " Hz, output gain "
        << fmt("%.6g", cfg.output_gain) << ", " << cfg.effects.size() << " effect(s)\n";
    for (std::size_t i = 0; i < cfg.effects.size(); ++i) {
        const EffectSpec& spec = cfg.effects[i];
        out << "effect " << (i + 1) << ": " << effect_kind_name(spec) << "\n";
        const GraphElement element = build_effect(spec, cfg.sample_rate_hz);
        analyze_element(out, element);
        if (const auto* stress = std::get_if<StressSpec>(&spec))
            print_stress_residues(out, stress->params);
    }
    return out.str();
}

std::string schedule_record(const ScheduleReport& r, ScheduleMode mode, int rep) {
    return fmt("record type=schedule rep=%d mode=%s blocks=%zu misses=%zu "
               "overflows=%zu latency_mean_us=%.1f latency_p95_us=%.1f "
               "latency_max_us=%.1f jitter_us=%.1f checksum=%016llx",
               rep, to_string(mode), r.blocks_processed, r.deadline_misses,
               r.queue_overflows, r.latency_mean_us, r.latency_p95_us,
               r.latency_max_us, r.jitter_us,
               static_cast<unsigned long long>(r.output_checksum));
}

}  // namespace fx
