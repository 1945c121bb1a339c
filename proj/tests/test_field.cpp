#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "erobot/field.hpp"

using namespace erobot;
using namespace erobot::field;

namespace {

SymbolVector sv(std::initializer_list<const char*> tokens)
{
    std::vector<Symbol> v;
    for (const char* t : tokens) v.push_back(Symbol::parse(t));
    return SymbolVector(std::move(v));
}

FieldConfig small(std::size_t capacity = 8)
{
    FieldConfig c;
    c.capacity = capacity;
    return c;
}

// Straightforward transcription of one cycle, kept separate from the field
// class: fronts over all slots, argmax set, gated readout, decay then excite.
struct ReferenceField {
    FieldConfig cfg;
    std::vector<SymbolVector> gx, gy;
    std::vector<double> e;

    SymbolVector cycle(const SymbolVector& x, const std::optional<SymbolVector>& yt, SessionRng& rng,
                       std::size_t ny)
    {
        std::vector<double> se(cfg.capacity, 0.0);
        double best_s = -1.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            std::size_t n = 0, m = 0;
            for (std::size_t j = 0; j < x.width(); ++j) {
                if (x[j].is_blank()) continue;
                ++n;
                m += x[j] == gx[i][j];
            }
            const double s = n ? double(m) / double(n) : 0.0;
            best_s = std::max(best_s, s);
            se[i] = s * (1 + cfg.bm * e[i]) + cfg.ba * e[i];
        }
        const double top = *std::max_element(se.begin(), se.end());
        std::vector<std::size_t> maxset;
        for (std::size_t i = 0; i < se.size(); ++i) {
            if (se[i] == top) maxset.push_back(i);
        }
        const std::size_t w = maxset[rng.uniform_index(maxset.size())];
        const bool fired = se[w] > cfg.x_inh;
        SymbolVector ym = fired && w < gy.size() ? gy[w] : SymbolVector(ny);
        SymbolVector y = cfg.select_source == OutputSource::teacher ? *yt : ym;
        const bool novel = gx.empty() || best_s < cfg.novelty_threshold;
        for (double& v : e) v *= 1.0 - 1.0 / cfg.tau;
        if (!novel && fired) e[w] = 1.0;
        const bool rec = cfg.learn_mode == LearnMode::all || (cfg.learn_mode == LearnMode::novel && novel);
        if (rec) {
            gx.push_back(x);
            gy.push_back(y);
            e.push_back(1.0);
        }
        return y;
    }
};

} // namespace

TEST(Similarity, CountsOnlyNonBlankInputs)
{
    EXPECT_DOUBLE_EQ(similarity(sv({"a", "b"}), sv({"a", "b"})), 1.0);
    EXPECT_DOUBLE_EQ(similarity(sv({"a", "b"}), sv({"a", "c"})), 0.5);
    EXPECT_DOUBLE_EQ(similarity(sv({"a", ""}), sv({"a", "c"})), 1.0);
    EXPECT_DOUBLE_EQ(similarity(sv({"", ""}), sv({"a", "c"})), 0.0);
    EXPECT_DOUBLE_EQ(similarity(sv({"x", "y", "z"}), sv({"x", "q", "z"})), 2.0 / 3.0);
    EXPECT_THROW(similarity(sv({"a"}), sv({"a", "b"})), ContractViolation);
}

TEST(Bias, MultiplicativeAndAdditiveTerms)
{
    FieldConfig c = small(2);
    c.bm = 0.5;
    c.ba = 0.25;
    AssociativeField f(1, 1, c);
    f.store_slot(0, sv({"a"}), sv({"p"}), 0.8);
    f.store_slot(1, sv({"b"}), sv({"q"}), 0.0);
    const auto se = f.bias(f.decode(sv({"a"})));
    EXPECT_DOUBLE_EQ(se[0], 1.0 * (1 + 0.5 * 0.8) + 0.25 * 0.8);
    EXPECT_DOUBLE_EQ(se[1], 0.0);
}

TEST(Choose, SingleWinnerUsesNoRandomness)
{
    SessionRng rng(1);
    const std::vector<double> se{0.1, 0.9, 0.3};
    const Choice c = choose(se, rng);
    EXPECT_EQ(c.i_read, 1u);
    EXPECT_EQ(c.maxset, std::vector<std::size_t>{1});
    EXPECT_EQ(rng.draws(), 0u);
}

TEST(Choose, TieDrawsFromTheMaxset)
{
    SessionRng rng(7);
    const std::vector<double> se{0.5, 0.2, 0.5, 0.5};
    std::map<std::size_t, int> hits;
    for (int k = 0; k < 3000; ++k) ++hits[choose(se, rng).i_read];
    EXPECT_EQ(hits.count(1), 0u);
    for (std::size_t i : {0u, 2u, 3u}) {
        const double sigma = std::sqrt(3000 * (1.0 / 3) * (2.0 / 3));
        EXPECT_LT(std::abs(hits[i] - 1000.0), 5 * sigma) << i;
    }
}

TEST(Encode, RetrievalIsGatedByInhibition)
{
    FieldConfig c = small(2);
    c.x_inh = 0.5;
    AssociativeField f(2, 1, c);
    f.store_slot(0, sv({"a", "b"}), sv({"p"}), 0.0);
    SessionRng rng(0);
    EXPECT_EQ(f.cycle(sv({"a", "b"}), std::nullopt, rng).y, sv({"p"}));
    const auto half = f.cycle(sv({"a", "z"}), std::nullopt, rng);
    EXPECT_FALSE(half.retrieved);
    EXPECT_TRUE(half.y.is_null());
}

TEST(Novelty, EmptyLtmIsAlwaysNew)
{
    AssociativeField f(1, 1, small());
    EXPECT_TRUE(f.detect_novelty(sv({"a"})));
    f.store_slot(0, sv({"a"}), sv({"p"}), 0.0);
    EXPECT_FALSE(f.detect_novelty(sv({"a"})));
    EXPECT_TRUE(f.detect_novelty(sv({"b"})));
}

TEST(UpdateE, DecaysEverySlotAndExcitesTheWinner)
{
    FieldConfig c = small(3);
    c.tau = 4.0;
    AssociativeField f(1, 1, c);
    f.store_slot(0, sv({"a"}), sv({"p"}), 1.0);
    f.store_slot(1, sv({"b"}), sv({"q"}), 0.5);
    f.update_e(1, 1.0, false);
    EXPECT_DOUBLE_EQ(f.slots()[0].e, 0.75);
    EXPECT_DOUBLE_EQ(f.slots()[1].e, 1.0);
    f.update_e(1, 1.0, true); // novel input: decay only
    EXPECT_DOUBLE_EQ(f.slots()[1].e, 0.75);
    f.update_e(0, 0.0, false); // retrieval did not fire: decay only
    EXPECT_DOUBLE_EQ(f.slots()[0].e, 0.75 * 0.75 * 0.75);
}

TEST(Learn, ModesAllNewNone)
{
    SessionRng rng(0);
    for (auto [mode, expected] : {std::pair{LearnMode::all, 3u}, std::pair{LearnMode::novel, 2u},
                                  std::pair{LearnMode::none, 0u}}) {
        FieldConfig c = small();
        c.learn_mode = mode;
        c.select_source = OutputSource::teacher;
        AssociativeField f(1, 1, c);
        f.cycle(sv({"a"}), sv({"p"}), rng);
        f.cycle(sv({"a"}), sv({"p"}), rng);
        f.cycle(sv({"b"}), sv({"q"}), rng);
        EXPECT_EQ(f.occupied_count(), expected) << to_string(mode);
    }
}

TEST(Learn, FirstEmptySlotAndCapacity)
{
    FieldConfig c = small(2);
    c.learn_mode = LearnMode::all;
    c.select_source = OutputSource::teacher;
    AssociativeField f(1, 1, c);
    f.store_slot(1, sv({"z"}), sv({"z"}), 0.0);
    SessionRng rng(0);
    EXPECT_TRUE(f.cycle(sv({"a"}), sv({"p"}), rng).recorded);
    EXPECT_EQ(f.slots()[0].gx, sv({"a"}));
    EXPECT_DOUBLE_EQ(f.slots()[0].e, 1.0);
    EXPECT_THROW(f.cycle(sv({"b"}), sv({"q"}), rng), CapacityError);
}

TEST(Cycle, TeacherOverridesMemory)
{
    FieldConfig c = small();
    c.select_source = OutputSource::teacher;
    AssociativeField f(1, 1, c);
    f.store_slot(0, sv({"a"}), sv({"p"}), 0.0);
    SessionRng rng(0);
    const auto r = f.cycle(sv({"a"}), sv({"t"}), rng);
    EXPECT_EQ(r.y, sv({"t"}));
    EXPECT_EQ(r.ym, sv({"p"}));
    EXPECT_THROW(f.cycle(sv({"a"}), std::nullopt, rng), ContractViolation);
}

TEST(Cycle, MatchesReferenceOnRandomSessions)
{
    const std::vector<const char*> alphabet{"", "a", "b", "c"};
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SessionRng script(seed);
        FieldConfig c = small(64);
        c.bm = 0.5;
        c.ba = seed % 2 ? 0.1 : 0.0;
        c.tau = 5.0 + static_cast<double>(seed % 7);
        c.x_inh = seed % 3 == 0 ? 0.4 : 0.0;
        AssociativeField f(2, 1, c);
        ReferenceField ref{c, {}, {}, {}};
        SessionRng rf(seed + 1000), rr(seed + 1000);
        for (int step = 0; step < 60; ++step) {
            const auto pick = [&] { return Symbol::parse(alphabet[script.uniform_index(alphabet.size())]); };
            const SymbolVector x{pick(), pick()};
            const SymbolVector y{pick()};
            const std::size_t m = script.uniform_index(3);
            const LearnMode mode = m == 0 ? LearnMode::all : m == 1 ? LearnMode::novel : LearnMode::none;
            const bool teach = script.uniform_index(2) == 0;
            c.learn_mode = mode;
            c.select_source = teach ? OutputSource::teacher : OutputSource::memory;
            f.set_learn_mode(mode);
            f.set_select_source(c.select_source);
            ref.cfg = c;
            std::optional<SymbolVector> yt;
            if (teach) yt = y;
            const auto got = f.cycle(x, yt, rf).y;
            const auto want = ref.cycle(x, yt, rr, 1);
            ASSERT_EQ(got, want) << "seed " << seed << " step " << step;
            for (std::size_t i = 0; i < ref.e.size(); ++i) ASSERT_DOUBLE_EQ(f.slots()[i].e, ref.e[i]);
            ASSERT_EQ(rf.draws(), rr.draws());
        }
    }
}

TEST(CorrectDecoding, DetectsAmbiguousInputs)
{
    const std::vector<SymbolVector> ok{sv({"a", "b"}), sv({"a", "c"}), sv({"d", "b"})};
    EXPECT_TRUE(check_correct_decoding(ok).ok);
    // A blank component makes ("a", .) match ("a", "b") as well as itself.
    const std::vector<SymbolVector> bad{sv({"a", ""}), sv({"a", "b"})};
    const auto r = check_correct_decoding(bad);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(r.witness->first, sv({"a", ""}));
}

TEST(Editing, SlotEditsEraseAndClear)
{
    AssociativeField f(2, 1, small(4));
    f.edit_slot(2, SlotPart::input, 0, Symbol('a'));
    EXPECT_TRUE(f.slots()[2].occupied);
    f.edit_slot(2, SlotPart::input, 0, Symbol());
    EXPECT_FALSE(f.slots()[2].occupied);
    f.store_slot(1, sv({"a", "b"}), sv({"c"}), 0.5);
    f.erase_slot(1);
    EXPECT_EQ(f.occupied_count(), 0u);
    f.store_slot(0, sv({"a", "b"}), sv({"c"}), 0.5);
    f.clear_all();
    EXPECT_EQ(f.occupied_count(), 0u);
    EXPECT_THROW(f.edit_slot(9, SlotPart::output, 0, Symbol('x')), ContractViolation);
}

TEST(Dump, FullPrecisionRoundTrips)
{
    AssociativeField f(2, 1, small(4));
    const double e = std::pow(1.0 - 1.0 / 50.0, 37);
    f.store_slot(3, sv({"@4", ""}), sv({"X"}), e);
    const std::string line = f.dump(true);
    const LtmRow row = parse_ltm_row(line.substr(0, line.size() - 1), 2, 1);
    EXPECT_EQ(row.index, 3u);
    EXPECT_EQ(row.gx, sv({"@4", ""}));
    EXPECT_EQ(row.e, e);
    EXPECT_EQ(f.dump(false), "3 @4 · → X " + format_e(e, false) + "\n");
    EXPECT_THROW(parse_ltm_row("3 a → X 0.5", 2, 1), ParseError);
}
