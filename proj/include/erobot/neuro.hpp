#pragma once

// Continuous-time three-layer associative network (ANN0): a similarity layer,
// a reciprocal-inhibition winner-take-all layer integrated with explicit
// Euler, and a linear encoding layer.

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "erobot/rng.hpp"
#include "erobot/symbol.hpp"

namespace erobot::neuro {

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// inhibit_others: every neuron inhibits all others. inhibit_all_excite_self: every neuron
/// inhibits all neurons including itself and excites itself with gain alpha.
enum class WtaVariant { inhibit_others, inhibit_all_excite_self };

struct NeuronStep {
    double u = 0.0;
    double y = 0.0;
};

/// Linear threshold element: i_net = sum g_k x_k, tau du/dt + u = i_net, y = max(u, 0).
NeuronStep neuron_step(std::span<const double> inputs, std::span<const double> gains, double u,
                       double tau, double dt);

/// Global inhibition x_inh during the competition and during the reset.
struct InhibitionSchedule {
    double release_level = 0.0;
    double reset_level = 20.0;
    double reset_duration = 10.0; ///< in units of tau
};

struct Ann0Params {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;
    double beta = 1.5;
    double alpha = 1.5;
    double tau = 1.0;
    double dt = 0.05;
    double u0 = 10.0;
    double noise_amp = 0.0;
    InhibitionSchedule x_inh;
    WtaVariant variant = WtaVariant::inhibit_others;
    double convergence_tol = 1e-9; ///< max |du| per unit time
    double settle_time = 5.0;      ///< noisy runs: single-winner dwell, in units of tau
    long step_budget = 4'000'000;

    void validate() const;
};

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Ann0State {
    std::vector<double> u; ///< postsynaptic potentials of N2
    std::vector<double> r; ///< outputs of N2, clamp(u, 0, u0)
    Matrix gx;             ///< n1 x n2, column i is ILTM location i
    Matrix gy;             ///< n3 x n2, column i is OLTM location i

    static Ann0State zeros(const Ann0Params& p);
};

/// s[i] = sum_j gx[j][i] x[j]
std::vector<double> similarity_front(const Ann0State& st, std::span<const double> x);
/// y[j] = sum_i gy[j][i] r[i]
std::vector<double> encode(const Ann0State& st);

/// One Euler step of the N2 layer at the given global inhibition. Noise is drawn
/// per neuron, uniform in (0, noise_amp), from `noise`. Returns the N3 output.
std::vector<double> ann0_step(Ann0State& st, std::span<const double> s, double x_inh,
                              const Ann0Params& p, SessionRng& noise);

/// Samples of (t, u, r) for CSV export.
class Trajectory {
public:
    void record(double t, const Ann0State& st);
    /// Header `t,u_0..u_{n-1},r_0..r_{n-1}`.
    void write_csv(std::ostream& out) const;
    std::size_t size() const { return t_.size(); }

private:
    std::vector<double> t_;
    std::vector<std::vector<double>> u_;
    std::vector<std::vector<double>> r_;
};

struct WtaResult {
    std::optional<std::size_t> winner;
    bool converged = false;
    long steps = 0;
    double settle_time = 0.0;
    std::vector<double> u_settled; ///< u at the end of the competition
    std::vector<double> y;         ///< N3 output at the end of the competition
    std::string diagnostic;        ///< empty unless something went wrong
};

/// Releases inhibition, integrates to a steady state (or the step budget),
/// reads the winner, then reasserts inhibition to reset the layer.
WtaResult run_wta_cycle(Ann0State& st, std::span<const double> x, const Ann0Params& p,
                        SessionRng& rng, Trajectory* trace = nullptr);

// Programmable logic array mode.

std::pair<int, int> pla_encode_bit(int bit);
/// Two-rail encoding of `m` bits of `value`, most significant bit first.
std::vector<double> pla_encode(unsigned value, std::size_t m);

struct TruthTable {
    std::size_t m = 0;                      ///< input bits
    std::size_t outputs = 0;                ///< output bits
    std::vector<std::vector<int>> rows;     ///< rows[input] = output bits

    static TruthTable random(std::size_t m, std::size_t outputs, SessionRng& rng);
};

/// One N2 neuron per row: gx is the two-rail row pattern, gy the row output.
Ann0State program_pla(const TruthTable& table, Ann0Params& p);

struct PlaReport {
    bool ok = true;
    std::vector<std::vector<int>> produced;
};

PlaReport pla_mode_check(const TruthTable& table, Ann0Params p, SessionRng& rng);

// Agreement between the continuous network and the discrete look-up table.

struct Association {
    SymbolVector x;
    SymbolVector y;
};

/// One-hot per field position over the given per-position alphabets, scaled
/// by 1/sqrt(width) so a fully matching input scores 1.
std::vector<double> embed(const SymbolVector& v, const std::vector<std::vector<Symbol>>& alphabets);

struct ProbeReport {
    SymbolVector probe;
    std::vector<double> ann0_freq; ///< per stored location
    std::vector<double> af0_freq;
    double max_z = 0.0;            ///< largest |difference| in binomial sigmas
    bool agree = true;
};

struct EquivalenceReport {
    std::vector<ProbeReport> probes;
    bool agree = true;
    std::string render() const;
};

EquivalenceReport ann0_vs_af0_equivalence(const std::vector<Association>& program,
                                          const std::vector<std::vector<Symbol>>& alphabets,
                                          const std::vector<SymbolVector>& probes, int trials,
                                          Ann0Params p, std::uint64_t seed, double sigmas = 5.0);

} // namespace erobot::neuro
