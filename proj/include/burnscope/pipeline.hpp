// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_PIPELINE_HPP
#define BURNSCOPE_PIPELINE_HPP

#include <burnscope/analytics.hpp>
#include <burnscope/attrib.hpp>
#include <burnscope/ledger.hpp>
#include <burnscope/prices.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace burnscope {

/** blk*.dat files under dir in name order. Throws Io when there are none. */
std::vector<std::filesystem::path> block_files(const std::filesystem::path& dir);

/**
 * Parses every block file on up to threads workers, restores chain order and
 * applies the blocks to a fresh index from a single thread.
 */
LedgerIndex ingest_block_dir(const std::filesystem::path& dir, Network net, unsigned threads = 0);

struct AnalysisOptions {
    uint64_t dust_threshold{DEFAULT_DUST_THRESHOLD};
    /** Keep callout transactions out of co-spend clustering. */
    bool exclude_hacker_phase{true};
};

struct Analysis {
    std::vector<ResolvedTransaction> txs;
    LabelTable labels;
    std::set<TxId> exclusions;
    ClusterSet clusters;
    size_t cluster_propagated{0};
    ClusterStats cluster_stats;
    BurnSeries burns;
    CampaignSummary campaign;
    std::vector<Payment> payments;
    std::optional<PaymentStats> payment_stats;
    DonationSummary donation;
};

/** Payment statistics are computed only when prices is given. */
Analysis run_analysis(const LedgerIndex& index, const LabelTable& external, const MessageRegistry& registry,
                      const PriceTable* prices, const AnalysisOptions& options = {});

struct VerifyCheck {
    std::string name;
    std::string expected;
    std::string actual;
    bool ok{false};
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool ok() const;
    size_t failures() const;
};

/** Re-runs the pipeline on a synth output directory and diffs it against ground_truth.json. */
VerifyReport verify_synth_dir(const std::filesystem::path& dir);

} // namespace burnscope

#endif // BURNSCOPE_PIPELINE_HPP
