#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "test_support.hpp"

using namespace maximin;

namespace {

std::string records_csv(const std::vector<ExperimentRecord>& r) {
    std::ostringstream os;
    write_records_csv(os, r);
    return os.str();
}

ExperimentConfig small_msweep() {
    ExperimentConfig c = ExperimentConfig::msweep();
    c.n = 6;
    c.m_list = {3, 4, 5};
    c.runs_per_cell = 4;
    return c;
}

}  // namespace

TEST(Config, Defaults) {
    const auto m = ExperimentConfig::msweep();
    EXPECT_EQ(m.n, 20u);
    EXPECT_EQ(std::accumulate(m.m_list.begin(), m.m_list.end(), std::size_t{0}), 220u);
    EXPECT_EQ(m.m_list.size(), 11u);
    EXPECT_EQ(m.p_list, std::vector<NormExponent>{NormExponent(3)});
    EXPECT_EQ(m.rho, 0.9999);
    EXPECT_EQ(m.runs_per_cell, 20);
    const auto p = ExperimentConfig::psweep();
    EXPECT_EQ(p.m_list, std::vector<std::size_t>{30});
    EXPECT_EQ(p.p_list.size(), 11u);
    EXPECT_EQ(p.p_list.back(), NormExponent(1000));
}

TEST(Config, Validation) {
    auto c = small_msweep();
    c.runs_per_cell = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_msweep();
    c.p_list = {NormExponent(1.5)};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_msweep();
    c.rho = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_msweep();
    c.p_list = {NormExponent(2), NormExponent(3)};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(GenerateInstances, ConsecutiveSlicesOfOneMatrix) {
    const auto cfg = ExperimentConfig::msweep();
    const auto cells = generate_instances(cfg);
    ASSERT_EQ(cells.size(), 11u);
    Xoshiro256 gen(derive_seed(cfg.seed, kInstanceStream));
    const auto all = draw_points(gen, 20, 220);
    std::size_t col = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto& inst = cells[k].instance;
        EXPECT_EQ(inst.m(), 10 + 2 * k);
        for (std::size_t i = 0; i < inst.m(); ++i, ++col)
            for (std::size_t j = 0; j < 20; ++j) {
                EXPECT_EQ(inst.point(i)[j], all[col][j]);
                EXPECT_GE(inst.point(i)[j], -1.0);
                EXPECT_LT(inst.point(i)[j], 1.0);
            }
        EXPECT_EQ(inst.weights(), Vector(inst.m(), 1.0));
    }
    EXPECT_EQ(col, 220u);
}

TEST(GenerateInstances, SameSeedSameInstances) {
    const auto a = generate_instances(ExperimentConfig::psweep());
    const auto b = generate_instances(ExperimentConfig::psweep());
    ASSERT_EQ(a.size(), 11u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(write_instance(a[k].instance), write_instance(b[k].instance));
        // every p-cell shares the same points
        for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(a[k].instance.point(i)[0], a[0].instance.point(i)[0]);
    }
}

TEST(RunExperiment, CompleteAndDeterministic) {
    const auto cfg = small_msweep();
    const auto r1 = run_experiment(cfg);
    const auto r2 = run_experiment(cfg);
    EXPECT_EQ(r1.size(), 3u * 2u * 4u);
    EXPECT_EQ(records_csv(r1), records_csv(r2));
    for (const auto& r : r1) {
        EXPECT_GE(r.objective, 0.0);
        EXPECT_GE(r.trials, 1u);
        EXPECT_GE(r.certified_ratio, 0.0);
        EXPECT_LE(r.certified_ratio, 1.0 + 1e-9);
        EXPECT_FALSE(r.oracle_value.has_value());
    }
    auto other = cfg;
    other.seed = 1;
    EXPECT_NE(records_csv(run_experiment(other)), records_csv(r1));
}

TEST(RunExperiment, PairedSeeds) {
    const auto recs = run_experiment(small_msweep());
    for (std::size_t k = 0; k + 1 < recs.size(); k += 2) {
        EXPECT_EQ(recs[k].algorithm, 1);
        EXPECT_EQ(recs[k + 1].algorithm, 2);
        EXPECT_EQ(recs[k].seed, recs[k + 1].seed);
        EXPECT_EQ(recs[k].run, recs[k + 1].run);
    }
}

TEST(RunExperiment, SingleExample21WithOracle) {
    auto cfg = ExperimentConfig::single(maximin::testing::example_21());
    cfg.with_oracle = true;
    cfg.runs_per_cell = 5;
    const auto recs = run_experiment(cfg);
    ASSERT_EQ(recs.size(), 10u);
    for (const auto& r : recs) {
        EXPECT_NEAR(r.gamma1, 0.8, 1e-2);
        ASSERT_TRUE(r.oracle_value.has_value());
        EXPECT_NEAR(*r.oracle_value, maximin::testing::kExample21Value, 1e-4);
        EXPECT_EQ(r.bound_certified.has_value(), r.algorithm == 2);
        if (r.algorithm == 2) {
            EXPECT_TRUE(*r.bound_certified);
        }
    }
    EXPECT_NE(records_csv(recs).find("oracle_value,bound_certified"), std::string::npos);
}

TEST(RunExperiment, SingleAlgorithm) {
    auto cfg = small_msweep();
    cfg.algorithms = AlgorithmChoice::Two;
    const auto recs = run_experiment(cfg);
    EXPECT_EQ(recs.size(), 12u);
    for (const auto& r : recs) EXPECT_EQ(r.algorithm, 2);
    const auto s = summarize(recs);
    for (const auto& c : s) EXPECT_TRUE(std::isnan(c.win_rate));
}

TEST(Summarize, OrderStatisticsAndWinRates) {
    const auto s = summarize(run_experiment(small_msweep()));
    ASSERT_EQ(s.size(), 6u);
    for (std::size_t k = 0; k < s.size(); k += 2) {
        EXPECT_NEAR(s[k].win_rate + s[k + 1].win_rate, 1.0, 1e-15);
        for (const auto& c : {s[k], s[k + 1]}) {
            EXPECT_LE(c.min, c.median);
            EXPECT_LE(c.median, c.max);
            EXPECT_LE(c.min, c.mean);
            EXPECT_LE(c.mean, c.max);
            EXPECT_EQ(c.count, 4u);
        }
    }
    EXPECT_THROW(summarize({}), std::invalid_argument);
}

TEST(Summarize, IdenticalAlgorithmsTie) {
    // Algorithm 1 fed the scalar matrix is algorithm 2; summarise hand-built pairs.
    Xoshiro256 gen(3);
    std::vector<ExperimentRecord> recs;
    const auto inst = maximin::testing::random_instance(gen, 8, 6, NormExponent(3));
    const auto scalar = scalar_matrix_solution(inst);
    for (int run = 0; run < 10; ++run) {
        for (int alg : {1, 2}) {
            SignSampler s(static_cast<std::uint64_t>(run));
            const auto c = alg == 1 ? sdp_rounding(inst, scalar, 0.9999, s).first : sign_rounding(inst, 0.9999, s).first;
            ExperimentRecord r;
            r.run = run;
            r.algorithm = alg;
            r.objective = c.objective;
            r.trials = 1;
            r.n = 8;
            r.m = 6;
            r.p = NormExponent(3);
            recs.push_back(r);
        }
    }
    const auto s = summarize(recs);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].win_rate, 0.5);
    EXPECT_EQ(s[1].win_rate, 0.5);
    EXPECT_EQ(s[0].objectives, s[1].objectives);
}

TEST(Output, FormatsAndColumns) {
    const auto recs = run_experiment(small_msweep());
    const std::string csv = records_csv(recs);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "mode,n,m,p,rho,run,algorithm,objective,trials,certified_ratio,gamma1,sdp_converged,seed");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 24);
    const auto s = summarize(recs);
    std::ostringstream sum, plot;
    write_summary_csv(sum, s);
    write_plot_data(plot, s);
    const std::string sum_text = sum.str(), plot_text = plot.str();
    EXPECT_EQ(std::count(sum_text.begin(), sum_text.end(), '\n'), 1 + 6 * 8);
    EXPECT_EQ(std::count(plot_text.begin(), plot_text.end(), '\n'), 1 + 6);
    EXPECT_EQ(plot_text.substr(plot_text.find('\n') + 1, 4), "3 1 ");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(std::stod(format_number(2.0 / 3.0)), 2.0 / 3.0);
}

TEST(CompareMeans, CountsAndExclusions) {
    auto cell = [](std::size_t index, int algorithm, double mean, bool converged) {
        CellSummary c;
        c.cell = index;
        c.algorithm = algorithm;
        c.mean = mean;
        c.sdp_converged = converged;
        return c;
    };
    const std::vector<CellSummary> s{cell(0, 1, 1.0, true), cell(0, 2, 2.0, true), cell(1, 1, 3.0, false),
                                     cell(1, 2, 2.0, false)};
    const auto v = compare_means(s);
    EXPECT_EQ(v.cells, 2u);
    EXPECT_EQ(v.wins, 1u);
    EXPECT_EQ(v.excluded, 1u);
}
