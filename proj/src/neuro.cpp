#include "erobot/neuro.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "erobot/field.hpp"

namespace erobot::neuro {

NeuronStep neuron_step(std::span<const double> inputs, std::span<const double> gains, double u,
                       double tau, double dt)
{
    if (inputs.size() != gains.size()) throw ContractViolation("inputs and gains differ in size");
    if (!(tau > 0.0) || !(dt > 0.0) || dt > tau / 20.0) {
        throw ContractViolation("neuron_step needs 0 < dt <= tau/20");
    }
    double i_net = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k) i_net += gains[k] * inputs[k];
    const double next = u + dt * (i_net - u) / tau;
    return {next, std::max(next, 0.0)};
}

void Ann0Params::validate() const
{
    if (n2 == 0) throw ContractViolation("ANN0 needs at least one N2 neuron");
    if (!(tau > 0.0) || !(dt > 0.0)) throw ContractViolation("tau and dt must be positive");
    if (dt > tau / 20.0) throw ContractViolation("dt must not exceed tau/20");
    if (!(u0 > 0.0)) throw ContractViolation("u0 must be positive");
    if (!(noise_amp >= 0.0)) throw ContractViolation("noise amplitude must be >= 0");
    if (step_budget <= 0) throw ContractViolation("step budget must be positive");
}

Ann0State Ann0State::zeros(const Ann0Params& p)
{
    p.validate();
    Ann0State st;
    st.u.assign(p.n2, 0.0);
    st.r.assign(p.n2, 0.0);
    st.gx = Matrix(p.n1, p.n2);
    st.gy = Matrix(p.n3, p.n2);
    return st;
}

std::vector<double> similarity_front(const Ann0State& st, std::span<const double> x)
{
    if (x.size() != st.gx.rows()) throw ContractViolation("input width does not match n1");
    std::vector<double> s(st.gx.cols(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) acc += st.gx(j, i) * x[j];
        s[i] = acc;
    }
    return s;
}

std::vector<double> encode(const Ann0State& st)
{
    std::vector<double> y(st.gy.rows(), 0.0);
    for (std::size_t j = 0; j < y.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < st.r.size(); ++i) acc += st.gy(j, i) * st.r[i];
        y[j] = acc;
    }
    return y;
}

std::vector<double> ann0_step(Ann0State& st, std::span<const double> s, double x_inh,
                              const Ann0Params& p, SessionRng& noise)
{
    const std::size_t n = st.u.size();
    if (s.size() != n || st.r.size() != n) throw ContractViolation("front size does not match n2");

    double total = 0.0;
    for (double r : st.r) total += r;
    const double self_gain = p.variant == WtaVariant::inhibit_others ? p.beta : p.alpha;
    const double rate = p.dt / p.tau;

    for (std::size_t i = 0; i < n; ++i) {
        const double jitter = p.noise_amp > 0.0 ? noise.uniform_real(0.0, p.noise_amp) : 0.0;
        const double drive = s[i] - x_inh - p.beta * total + self_gain * st.r[i] + jitter;
        st.u[i] += rate * (drive - st.u[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(st.u[i])) {
            throw NumericError(fmt::format("non-finite potential at neuron {}", i));
        }
        st.r[i] = std::clamp(st.u[i], 0.0, p.u0);
    }
    return encode(st);
}

void Trajectory::record(double t, const Ann0State& st)
{
    t_.push_back(t);
    u_.push_back(st.u);
    r_.push_back(st.r);
}

void Trajectory::write_csv(std::ostream& out) const
{
    const std::size_t n = u_.empty() ? 0 : u_.front().size();
    out << 't';
    for (std::size_t i = 0; i < n; ++i) out << ",u_" << i;
    for (std::size_t i = 0; i < n; ++i) out << ",r_" << i;
    out << '\n';
    for (std::size_t k = 0; k < t_.size(); ++k) {
        out << fmt::format("{}", t_[k]);
        for (double v : u_[k]) out << fmt::format(",{}", v);
        for (double v : r_[k]) out << fmt::format(",{}", v);
        out << '\n';
    }
}

WtaResult run_wta_cycle(Ann0State& st, std::span<const double> x, const Ann0Params& p,
                        SessionRng& rng, Trajectory* trace)
{
    p.validate();
    const std::vector<double> s = similarity_front(st, x);
    WtaResult res;
    std::vector<double> prev(st.u.size());
    double t = 0.0;
    double dwell = 0.0;
    if (trace) trace->record(t, st);

    while (res.steps < p.step_budget) {
        prev = st.u;
        ann0_step(st, s, p.x_inh.release_level, p, rng);
        ++res.steps;
        t += p.dt;
        if (trace) trace->record(t, st);

        double max_rate = 0.0;
        std::size_t active = 0;
        for (std::size_t i = 0; i < st.r.size(); ++i) {
            // Potentials, not outputs: after a reset every r sits at 0 while u climbs.
            max_rate = std::max(max_rate, std::abs(st.u[i] - prev[i]) / p.dt);
            if (st.r[i] > 0.0) ++active;
        }
        if (max_rate < p.convergence_tol) {
            res.converged = true;
            break;
        }
        if (p.noise_amp > 0.0) {
            dwell = active == 1 ? dwell + p.dt : 0.0;
            if (dwell >= p.settle_time * p.tau) {
                res.converged = true;
                break;
            }
        }
    }
    res.settle_time = t;

    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < st.r.size(); ++i) {
        if (st.r[i] > 0.0) winners.push_back(i);
    }
    if (winners.size() == 1) res.winner = winners.front();
    if (!res.converged) {
        res.diagnostic = fmt::format("no convergence within {} steps", p.step_budget);
    } else if (winners.size() > 1) {
        res.diagnostic = fmt::format("{} neurons remain active", winners.size());
    }
    res.u_settled = st.u;
    res.y = encode(st);

    const long reset_steps = static_cast<long>(std::ceil(p.x_inh.reset_duration * p.tau / p.dt));
    for (long k = 0; k < reset_steps; ++k) {
        ann0_step(st, s, p.x_inh.reset_level, p, rng);
        t += p.dt;
        if (trace) trace->record(t, st);
    }
    return res;
}

std::pair<int, int> pla_encode_bit(int bit)
{
    if (bit == 0) return {0, 1};
    if (bit == 1) return {1, 0};
    throw ContractViolation("PLA input bits must be 0 or 1");
}

std::vector<double> pla_encode(unsigned value, std::size_t m)
{
    std::vector<double> out;
    out.reserve(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        const int bit = static_cast<int>((value >> (m - 1 - k)) & 1U);
        const auto [a, b] = pla_encode_bit(bit);
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

TruthTable TruthTable::random(std::size_t m, std::size_t outputs, SessionRng& rng)
{
    TruthTable t;
    t.m = m;
    t.outputs = outputs;
    t.rows.assign(std::size_t{1} << m, std::vector<int>(outputs, 0));
    for (auto& row : t.rows) {
        for (auto& bit : row) bit = static_cast<int>(rng.uniform_index(2));
    }
    return t;
}

Ann0State program_pla(const TruthTable& table, Ann0Params& p)
{
    if (table.rows.size() != (std::size_t{1} << table.m)) {
        throw ContractViolation("truth table must list every input row");
    }
    p.n1 = 2 * table.m;
    p.n2 = table.rows.size();
    p.n3 = table.outputs;
    Ann0State st = Ann0State::zeros(p);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto rails = pla_encode(static_cast<unsigned>(i), table.m);
        for (std::size_t j = 0; j < rails.size(); ++j) st.gx(j, i) = rails[j];
        for (std::size_t k = 0; k < table.outputs; ++k) st.gy(k, i) = table.rows[i].at(k);
    }
    return st;
}

PlaReport pla_mode_check(const TruthTable& table, Ann0Params p, SessionRng& rng)
{
    Ann0State st = program_pla(table, p);
    PlaReport report;
    for (std::size_t input = 0; input < table.rows.size(); ++input) {
        const auto x = pla_encode(static_cast<unsigned>(input), table.m);
        const WtaResult res = run_wta_cycle(st, x, p, rng);
        std::vector<int> bits(table.outputs, 0);
        for (std::size_t k = 0; k < table.outputs; ++k) bits[k] = res.y[k] > 0.0 ? 1 : 0;
        if (!res.winner || bits != table.rows[input]) report.ok = false;
        report.produced.push_back(std::move(bits));
    }
    return report;
}

std::vector<double> embed(const SymbolVector& v, const std::vector<std::vector<Symbol>>& alphabets)
{
    if (v.width() != alphabets.size()) throw ContractViolation("one alphabet per position required");
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.width()));
    std::vector<double> out;
    for (std::size_t j = 0; j < v.width(); ++j) {
        const auto& alpha = alphabets[j];
        bool found = v[j].is_blank();
        for (const auto& sym : alpha) {
            const bool hit = !v[j].is_blank() && sym == v[j];
            found = found || hit;
            out.push_back(hit ? scale : 0.0);
        }
        if (!found) throw ContractViolation("symbol '" + v[j].token() + "' not in its alphabet");
    }
    return out;
}

std::string EquivalenceReport::render() const
{
    std::string out;
    for (const auto& p : probes) {
        out += fmt::format("probe {} | ann0 {:.4f} | af0 {:.4f} | max_z {:.3f} | {}\n",
                           p.probe.render(), fmt::join(p.ann0_freq, " "),
                           fmt::join(p.af0_freq, " "), p.max_z, p.agree ? "agree" : "DISAGREE");
    }
    out += agree ? "equivalence: agree\n" : "equivalence: DISAGREE\n";
    return out;
}

EquivalenceReport ann0_vs_af0_equivalence(const std::vector<Association>& program,
                                          const std::vector<std::vector<Symbol>>& alphabets,
                                          const std::vector<SymbolVector>& probes, int trials,
                                          Ann0Params p, std::uint64_t seed, double sigmas)
{
    if (program.empty() || trials <= 0) throw ContractViolation("equivalence needs a program and trials");
    const std::size_t nx = program.front().x.width();
    const std::size_t ny = program.front().y.width();

    field::FieldConfig cfg;
    cfg.capacity = program.size();
    field::AssociativeField table(nx, ny, cfg);
    for (std::size_t i = 0; i < program.size(); ++i) {
        table.store_slot(i, program[i].x, program[i].y, 0.0);
    }

    p.n1 = embed(program.front().x, alphabets).size();
    p.n2 = program.size();
    p.n3 = 0;
    Ann0State net = Ann0State::zeros(p);
    for (std::size_t i = 0; i < program.size(); ++i) {
        const auto col = embed(program[i].x, alphabets);
        for (std::size_t j = 0; j < col.size(); ++j) net.gx(j, i) = col[j];
    }

    SessionRng choice_rng(seed);
    SessionRng noise_rng(seed ^ 0x9E3779B97F4A7C15ULL);
    EquivalenceReport report;
    for (const auto& probe : probes) {
        ProbeReport pr;
        pr.probe = probe;
        pr.ann0_freq.assign(program.size(), 0.0);
        pr.af0_freq.assign(program.size(), 0.0);
        const auto x = embed(probe, alphabets);
        const auto se = table.bias(table.decode(probe));
        for (int k = 0; k < trials; ++k) {
            pr.af0_freq[field::choose(se, choice_rng).i_read] += 1.0;
            if (auto w = run_wta_cycle(net, x, p, noise_rng).winner) pr.ann0_freq[*w] += 1.0;
        }
        for (std::size_t i = 0; i < program.size(); ++i) {
            pr.ann0_freq[i] /= trials;
            pr.af0_freq[i] /= trials;
            const double pooled = 0.5 * (pr.ann0_freq[i] + pr.af0_freq[i]);
            const double sigma = std::sqrt(2.0 * pooled * (1.0 - pooled) / trials);
            const double diff = std::abs(pr.ann0_freq[i] - pr.af0_freq[i]);
            if (sigma == 0.0) {
                if (diff != 0.0) pr.agree = false;
                continue;
            }
            pr.max_z = std::max(pr.max_z, diff / sigma);
        }
        if (pr.max_z > sigmas) pr.agree = false;
        report.agree = report.agree && pr.agree;
        report.probes.push_back(std::move(pr));
    }
    return report;
}

} // namespace erobot::neuro
