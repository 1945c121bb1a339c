#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "erobot/field.hpp"
#include "erobot/neuro.hpp"

using namespace erobot;
using namespace erobot::neuro;

namespace {

Ann0Params identity_net(std::size_t n, double beta, WtaVariant v = WtaVariant::inhibit_others)
{
    Ann0Params p;
    p.n1 = p.n2 = n;
    p.beta = p.alpha = beta;
    p.variant = v;
    return p;
}

Ann0State identity_state(const Ann0Params& p)
{
    Ann0State st = Ann0State::zeros(p);
    for (std::size_t i = 0; i < p.n2; ++i) st.gx(i, i) = 1.0;
    return st;
}

std::size_t argmax(const std::vector<double>& v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

} // namespace

TEST(Neuron, EulerMatchesTheClosedForm)
{
    const std::vector<double> x{2.0, 4.0, 7.0};
    const std::vector<double> g{0.5, 0.25, 0.0};
    const double drive = 2.0;
    const double tau = 1.0;
    const double dt = 0.05;
    double u = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const auto step = neuron_step(x, g, u, tau, dt);
        u = step.u;
        EXPECT_NEAR(u, drive * (1.0 - std::pow(1.0 - dt / tau, k)), 1e-12);
        EXPECT_EQ(step.y, u);
    }
    const auto neg = neuron_step(x, std::vector<double>{0.0, 0.0, -1.0}, 0.0, tau, dt);
    EXPECT_LT(neg.u, 0.0);
    EXPECT_EQ(neg.y, 0.0);
    EXPECT_THROW(neuron_step(x, g, 0.0, 1.0, 0.1), ContractViolation);
    EXPECT_THROW(neuron_step(x, std::vector<double>{1.0}, 0.0, 1.0, 0.05), ContractViolation);
}

TEST(Wta, VariantsCoincideWhenAlphaEqualsBeta)
{
    SessionRng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 3 + rng.uniform_index(10);
        Ann0Params pa = identity_net(n, 1.0 + rng.uniform_real(0.1, 2.0));
        Ann0Params pb = pa;
        pb.variant = WtaVariant::inhibit_all_excite_self;
        Ann0State a = identity_state(pa);
        Ann0State b = identity_state(pb);
        std::vector<double> s(n);
        for (auto& v : s) v = rng.uniform_real(0.0, 1.0);
        SessionRng na(1), nb(1);
        for (int k = 0; k < 500; ++k) {
            ann0_step(a, s, 0.0, pa, na);
            ann0_step(b, s, 0.0, pb, nb);
            ASSERT_EQ(a.u, b.u);
        }
    }
}

TEST(Wta, WinnerIsTheArgmaxAndTheLayerResets)
{
    SessionRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(31);
        const Ann0Params p = identity_net(n, 1.0 + rng.uniform_real(0.05, 2.0));
        Ann0State st = identity_state(p);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform_real(0.0, 1.0);
        const WtaResult res = run_wta_cycle(st, x, p, rng);
        ASSERT_TRUE(res.converged) << res.diagnostic;
        ASSERT_TRUE(res.winner);
        EXPECT_EQ(*res.winner, argmax(x));
        EXPECT_TRUE(res.diagnostic.empty());
        // The winner settles at its own similarity.
        EXPECT_NEAR(res.u_settled[*res.winner], x[*res.winner], 1e-6);
        for (double r : st.r) EXPECT_EQ(r, 0.0);
    }
}

TEST(Wta, StepHalvingKeepsTheFixedPoint)
{
    SessionRng rng(2);
    const std::vector<double> x{0.3, 0.9, 0.5, 0.7};
    Ann0Params p = identity_net(4, 1.5);
    Ann0State a = identity_state(p);
    const auto coarse = run_wta_cycle(a, x, p, rng);
    p.dt /= 2.0;
    Ann0State b = identity_state(p);
    const auto fine = run_wta_cycle(b, x, p, rng);
    ASSERT_TRUE(coarse.converged && fine.converged);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_LT(std::abs(coarse.u_settled[i] - fine.u_settled[i]),
                  1e-4 * std::max(1.0, std::abs(fine.u_settled[i])));
    }
}

TEST(Wta, TrajectoryCsvHasOneColumnPerPotentialAndOutput)
{
    SessionRng rng(0);
    const Ann0Params p = identity_net(2, 1.5);
    Ann0State st = identity_state(p);
    Trajectory traj;
    const std::vector<double> x{0.2, 0.4};
    const auto res = run_wta_cycle(st, x, p, rng, &traj);
    EXPECT_GT(traj.size(), static_cast<std::size_t>(res.steps));
    std::ostringstream out;
    traj.write_csv(out);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "t,u_0,u_1,r_0,r_1");
}

TEST(Wta, ParameterContracts)
{
    Ann0Params p = identity_net(3, 1.5);
    p.dt = 0.2;
    EXPECT_THROW(p.validate(), ContractViolation);
    p = identity_net(0, 1.5);
    EXPECT_THROW(p.validate(), ContractViolation);
}

TEST(Pla, TwoRailEncoding)
{
    EXPECT_EQ(pla_encode_bit(0), (std::pair<int, int>{0, 1}));
    EXPECT_EQ(pla_encode_bit(1), (std::pair<int, int>{1, 0}));
    EXPECT_EQ(pla_encode(0b10, 2), (std::vector<double>{1, 0, 0, 1}));
    EXPECT_THROW(pla_encode_bit(2), ContractViolation);
}

TEST(Pla, ReproducesRandomTables)
{
    SessionRng rng(4);
    for (std::size_t m = 1; m <= 4; ++m) {
        const TruthTable t = TruthTable::random(m, 3, rng);
        const PlaReport rep = pla_mode_check(t, Ann0Params{}, rng);
        EXPECT_TRUE(rep.ok);
        EXPECT_EQ(rep.produced, t.rows);
    }
}

TEST(Equivalence, NoisyTieSplitsLikeTheLookUpTable)
{
    const std::vector<Association> program = {
        {{Symbol('a'), Symbol('b')}, {Symbol('p')}},
        {{Symbol('a'), Symbol('c')}, {Symbol('q')}},
        {{Symbol('d'), Symbol('c')}, {Symbol('r')}},
    };
    const std::vector<std::vector<Symbol>> alphabets = {{Symbol('a'), Symbol('d')},
                                                        {Symbol('b'), Symbol('c')}};
    Ann0Params p;
    p.noise_amp = 0.05;
    const auto rep = ann0_vs_af0_equivalence(program, alphabets,
                                             {{Symbol('a'), Symbol()}, {Symbol('a'), Symbol('b')}},
                                             300, p, 9);
    EXPECT_TRUE(rep.agree) << rep.render();
    ASSERT_EQ(rep.probes.size(), 2u);
    EXPECT_EQ(rep.probes[0].af0_freq[2], 0.0);
    EXPECT_EQ(rep.probes[0].ann0_freq[2], 0.0);
    EXPECT_EQ(rep.probes[1].ann0_freq[0], 1.0);
}
