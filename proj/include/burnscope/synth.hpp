// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_SYNTH_HPP
#define BURNSCOPE_SYNTH_HPP

#include <burnscope/analytics.hpp>
#include <burnscope/attrib.hpp>
#include <burnscope/prices.hpp>
#include <burnscope/wire.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace burnscope {

/** A scenario address slot, e.g. ("gru_burner", 0). */
struct RoleRef {
    std::string role;
    uint32_t index{0};
    friend auto operator<=>(const RoleRef&, const RoleRef&) = default;
};

struct EntityCounts {
    uint32_t gru_burners{0};
    uint32_t gru_payers{0};
    uint32_t gru_receivers{0};
    /** Payers using native segwit outputs, taken from the end of the payer range. */
    uint32_t gru_bech32{0};
    uint32_t svr{0};
    uint32_t fsb{0};
    /** Extra addresses co-spending with each FSB address; size must equal fsb when present. */
    std::vector<uint32_t> fsb_cospend_extras;
};

struct BurnEntry {
    Date date;
    std::string message_id;
    uint32_t tx_count{0};
    Amount total;
    /** Pins every transaction of the entry to one burner. */
    std::optional<uint32_t> sender;
};

struct NoiseBurn {
    Date date;
    uint32_t tx_count{0};
    Amount total;
    std::string payload;
};

struct PaymentEntry {
    Date date;
    Entity entity{Entity::GRU};
    uint32_t tx_count{0};
    Amount per_output;
    uint32_t fan_out{1};
    /** Sent from the single exactly funded fan-out wallet. */
    bool dedicated_sender{false};
    /** Pins all outputs to one receiver of the entity pool. */
    std::optional<uint32_t> receiver;
};

struct FundingSpec {
    Date date;
    Amount amount;
    uint32_t peel_hops{0};
    Amount peel_amount;
    RoleRef final_recipient;
};

struct DustGroup {
    uint32_t count{0};
    Amount value;
};

struct DonationSpec {
    Date date;
    std::string message_id;
    uint32_t tx_count{0};
    /** Checked against 2 × tx_count plus the dust outputs. */
    uint32_t total_outputs{0};
    Amount donation_output;
    std::vector<DustGroup> dust;
};

struct CounterpartyEvent {
    Date date;
    Entity entity{Entity::UNKNOWN};
    Amount value;
};

struct LegacySpend {
    Date date;
    RoleRef who;
    Amount value;
};

struct NamedAddress {
    RoleRef slot;
    /** Mainnet base58 address whose key hash is reused under regtest. */
    std::string address;
};

struct ChainScenario {
    uint64_t seed{0};
    Date genesis_date{2018, 1, 1};
    Date funding_date{2022, 1, 15};
    /** Day of the FSB co-spend consolidations. */
    Date cospend_date{2022, 2, 20};
    Amount fee{500};
    uint32_t txs_per_block{50};
    Amount burn_receiver_output{547};
    EntityCounts entities;
    std::vector<BurnEntry> burns;
    std::vector<NoiseBurn> noise;
    std::vector<PaymentEntry> payments;
    std::optional<FundingSpec> funding;
    std::optional<DonationSpec> donation;
    std::optional<RoleRef> counterparty_subject;
    std::vector<CounterpartyEvent> counterparty;
    std::vector<LegacySpend> legacy;
    std::vector<NamedAddress> named;
    PriceTable prices;
    /** Message registry used for payloads and matching; defaults when not configured. */
    MessageRegistry registry = MessageRegistry::defaults();
};

/** Throws BadConfig on unknown keys, missing sections or unknown entities/messages. */
ChainScenario scenario_from_json(std::string_view json);
ChainScenario scenario_from_file(const std::filesystem::path& path);
std::string scenario_to_json(const ChainScenario& s);

struct CampaignTruth {
    std::string message_id;
    size_t tx_count{0};
    Amount burned;
    size_t unique_inputs{0};
    size_t unique_addresses{0};
    uint32_t first_time{0};
    uint32_t last_time{0};
};

struct FanoutTruth {
    TxId txid;
    Date date;
    size_t inputs{0};
    size_t outputs{0};
    Amount per_output;
    Amount total;
    UsdCents usd_total;
};

struct GroundTruth {
    uint64_t seed{0};
    size_t blocks{0};
    size_t transactions{0};
    std::map<Date, Amount> daily_burns;
    std::map<Date, size_t> campaign_txs_by_date;
    std::vector<CampaignTruth> campaign;
    size_t campaign_burn_txs{0};
    Amount campaign_burned;
    size_t campaign_unique_inputs{0};
    std::map<std::string, Amount> pinned_sender_burns;
    std::optional<DonationSummary> donation;
    std::vector<PaymentRow> payments;
    std::vector<ClusterRow> clusters;
    std::map<std::string, Entity> labels;
    std::optional<PeelTrace> trace;
    std::optional<std::string> counterparty_address;
    std::vector<CounterpartyRow> counterparty;
    std::optional<FanoutTruth> fanout;

    std::string to_json() const;
    static GroundTruth from_json(std::string_view json);
};

struct SynthOutput {
    std::vector<Block> blocks;
    Bytes block_file;
    GroundTruth truth;
    LabelTable external_labels;
};

/** Deterministic for a fixed scenario. Throws InfeasibleScenario. */
SynthOutput build_scenario(const ChainScenario& scenario);

/**
 * Writes blocks/blk00000.dat, labels.csv, prices.csv, registry.json,
 * scenario.json and ground_truth.json under dir.
 */
void write_synth_dir(const ChainScenario& scenario, const SynthOutput& out, const std::filesystem::path& dir);

} // namespace burnscope

#endif // BURNSCOPE_SYNTH_HPP
