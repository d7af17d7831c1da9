// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "test_util.hpp"

#include <burnscope/error.hpp>
#include <burnscope/pipeline.hpp>
#include <burnscope/synth.hpp>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

using namespace burnscope;
using namespace burnscope::test;
using nlohmann::json;

namespace {

std::filesystem::path baseline_path()
{
    return std::filesystem::path(BURNSCOPE_SOURCE_DIR) / "scenarios" / "baseline.json";
}

json tiny()
{
    return json::parse(R"({
        "seed": 3,
        "entities": {"gru_burners": 1, "svr": 1},
        "burn_schedule": [{"date": "2022-02-12", "message": "gru-to-svr", "tx_count": 1, "total_sat": 1}]
    })");
}

Errc code_of(const json& j)
{
    try {
        build_scenario(scenario_from_json(j.dump()));
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Io;
}

} // namespace

TEST(Synth, BaselineIsDeterministic)
{
    const ChainScenario s = scenario_from_file(baseline_path());
    const SynthOutput a = build_scenario(s);
    const SynthOutput b = build_scenario(scenario_from_file(baseline_path()));
    EXPECT_EQ(a.block_file, b.block_file);
    EXPECT_EQ(a.truth.to_json(), b.truth.to_json());
    EXPECT_EQ(GroundTruth::from_json(a.truth.to_json()).to_json(), a.truth.to_json());
}

TEST(Synth, SeedChangesTheChain)
{
    ChainScenario s = scenario_from_file(baseline_path());
    const Bytes a = build_scenario(s).block_file;
    s.seed += 1;
    EXPECT_NE(build_scenario(s).block_file, a);
}

TEST(Synth, BaselineConservesValue)
{
    const SynthOutput out = build_scenario(scenario_from_file(baseline_path()));
    const LedgerIndex idx = build_index(out.blocks, Network::Regtest);
    EXPECT_EQ(idx.report().missing_prevouts, 0u);
    EXPECT_EQ(idx.report().merkle_mismatches, 0u);
    uint64_t minted = 0, fees = 0, unspent = 0;
    for (const ResolvedTransaction& r : idx.resolve_all()) {
        if (r.coinbase) {
            minted += r.output_total().sat();
        } else {
            ASSERT_TRUE(r.fee);
            fees += r.fee->sat();
        }
        for (const ResolvedOutput& o : r.outputs) {
            if (!idx.spender(OutPoint{r.txid, o.vout})) unspent += o.value.sat();
        }
    }
    EXPECT_EQ(minted, fees + unspent);
    EXPECT_EQ(out.truth.transactions, idx.report().transactions);
    EXPECT_EQ(out.truth.blocks, idx.report().blocks);
}

TEST(Synth, ScenarioJsonRoundTrip)
{
    const ChainScenario s = scenario_from_file(baseline_path());
    const std::string once = scenario_to_json(s);
    EXPECT_EQ(scenario_to_json(scenario_from_json(once)), once);
    EXPECT_EQ(build_scenario(scenario_from_json(once)).block_file, build_scenario(s).block_file);
}

TEST(Synth, ConfigErrors)
{
    json j = tiny();
    j.erase("burn_schedule");
    EXPECT_EQ(code_of(j), Errc::BadConfig);
    j = tiny();
    j["burn_schedule"][0]["message"] = "gru-to-nsa";
    EXPECT_EQ(code_of(j), Errc::BadConfig);
    j = tiny();
    j["entities"]["nsa"] = 2;
    EXPECT_EQ(code_of(j), Errc::BadConfig);
    j = tiny();
    j["surprise"] = true;
    EXPECT_EQ(code_of(j), Errc::BadConfig);
    j = tiny();
    j["payment_schedule"] = json::array({{{"date", "2022-02-12"}, {"entity", "SVR"}, {"tx_count", 1}, {"per_output_sat", 547}}});
    EXPECT_EQ(code_of(j), Errc::BadConfig);
    j = tiny();
    j["burn_schedule"][0]["date"] = "2022-2-12";
    EXPECT_EQ(code_of(j), Errc::BadConfig);
}

TEST(Synth, InfeasibleScenarios)
{
    json j = tiny();
    j["burn_schedule"][0]["tx_count"] = 2;
    EXPECT_EQ(code_of(j), Errc::InfeasibleScenario);
    j = tiny();
    j["entities"]["svr"] = 0;
    EXPECT_EQ(code_of(j), Errc::InfeasibleScenario);
}

TEST(Synth, SingleSatoshiBurnSurvivesThePipeline)
{
    const auto dir = scratch_dir("one-sat");
    const ChainScenario s = scenario_from_json(tiny().dump());
    const SynthOutput out = build_scenario(s);
    write_synth_dir(s, out, dir);
    const LedgerIndex idx = ingest_block_dir(dir / "blocks", Network::Regtest);
    const BurnSeries series = burn_series(idx, {}, true, s.registry);
    ASSERT_EQ(series.records.size(), 1u);
    EXPECT_EQ(series.daily.at(Date{2022, 2, 12}), Amount(1));
    EXPECT_EQ(out.truth.daily_burns.at(Date{2022, 2, 12}), Amount(1));
    EXPECT_TRUE(verify_synth_dir(dir).ok());
}

TEST(Synth, BaselineVerifies)
{
    const auto dir = scratch_dir("baseline");
    const ChainScenario s = scenario_from_file(baseline_path());
    write_synth_dir(s, build_scenario(s), dir);
    for (const char* f : {"blocks/blk00000.dat", "labels.csv", "prices.csv", "registry.json", "scenario.json",
                          "ground_truth.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    const VerifyReport r = verify_synth_dir(dir);
    for (const VerifyCheck& c : r.checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.expected << " vs " << c.actual;
    EXPECT_GT(r.checks.size(), 100u);
}

TEST(Synth, VerifyCatchesTamperedTruth)
{
    const auto dir = scratch_dir("tampered");
    const ChainScenario s = scenario_from_file(baseline_path());
    SynthOutput out = build_scenario(s);
    out.truth.campaign_burned = out.truth.campaign_burned + Amount(1);
    write_synth_dir(s, out, dir);
    const VerifyReport r = verify_synth_dir(dir);
    EXPECT_FALSE(r.ok());
    EXPECT_GE(r.failures(), 1u);
}

TEST(Synth, BaselineGroundTruthFigures)
{
    const GroundTruth t = build_scenario(scenario_from_file(baseline_path())).truth;
    EXPECT_EQ(t.daily_burns.at(Date{2022, 2, 12}), Amount(369'113'600));
    EXPECT_EQ(t.daily_burns.at(Date{2022, 2, 18}), Amount(416'773'700));
    EXPECT_EQ(t.campaign_burned, Amount(706'000'000));
    EXPECT_EQ(t.campaign_burn_txs, 793u);
    EXPECT_EQ(t.campaign_unique_inputs, 275u);
    EXPECT_EQ(t.pinned_sender_burns.at("mjf26qAFzrwwc4pVdqJ1YepwVERfDiyZmD"), Amount(96'658'067));
    ASSERT_TRUE(t.donation);
    EXPECT_EQ(t.donation->tx_count, 11u);
    EXPECT_EQ(t.donation->total_outputs, 637u);
    EXPECT_EQ(t.donation->donated_usd.str(), "975.92");
    EXPECT_EQ(t.donation->output_mean.str(), "3.22");
    EXPECT_EQ(t.donation->output_min.str(), "0.23");
    ASSERT_TRUE(t.fanout);
    EXPECT_EQ(t.fanout->outputs, 880u);
    EXPECT_EQ(t.fanout->usd_total.str(), "191.10");
}
