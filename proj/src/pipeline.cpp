// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/error.hpp>
#include <burnscope/pipeline.hpp>
#include <burnscope/synth.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

namespace burnscope {

std::vector<std::filesystem::path> block_files(const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) fail(Errc::Io, "not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("blk", 0) == 0 && entry.path().extension() == ".dat") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) fail(Errc::Io, "no blk*.dat files in " + dir.string());
    std::sort(files.begin(), files.end());
    return files;
}

LedgerIndex ingest_block_dir(const std::filesystem::path& dir, Network net, unsigned threads)
{
    const std::vector<std::filesystem::path> files = block_files(dir);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::vector<Block>> parsed(files.size());
    for (size_t lo = 0; lo < files.size(); lo += threads) {
        std::vector<std::future<std::vector<Block>>> jobs;
        const size_t hi = std::min(files.size(), lo + threads);
        for (size_t i = lo; i < hi; ++i) {
            jobs.push_back(std::async(std::launch::async, [&, i] {
                const Bytes bytes = read_file(files[i]);
                return parse_block_file(ByteSpan(bytes), net);
            }));
        }
        for (size_t i = lo; i < hi; ++i) parsed[i] = jobs[i - lo].get();
    }
    std::vector<Block> all;
    for (auto& blocks : parsed) std::move(blocks.begin(), blocks.end(), std::back_inserter(all));
    return build_index(order_chain(std::move(all)), net);
}

Analysis run_analysis(const LedgerIndex& index, const LabelTable& external, const MessageRegistry& registry,
                      const PriceTable* prices, const AnalysisOptions& options)
{
    Analysis a;
    a.txs = index.resolve_all();
    a.labels = propagate_labels(a.txs, registry, external);
    if (options.exclude_hacker_phase) a.exclusions = hacker_phase_exclusions(a.txs, registry);
    std::vector<std::string> universe;
    for (const auto& [addr, _] : a.labels.entries()) universe.push_back(addr);
    a.clusters = cospend_clusters(a.txs, a.exclusions, universe);
    a.cluster_propagated = propagate_cluster_labels(a.clusters, a.labels);
    a.cluster_stats = cluster_stats(a.clusters, a.labels, a.txs, a.exclusions);
    a.burns = burn_series(index, {}, false, registry);
    a.campaign = campaign_summary(index, registry);
    a.payments = collect_payments(a.txs, a.labels, registry, options.dust_threshold);
    if (prices) {
        a.payment_stats = payment_stats(a.payments, *prices);
        a.donation = donation_report(a.txs, registry, a.labels, *prices);
    }
    return a;
}

bool VerifyReport::ok() const
{
    return failures() == 0;
}

size_t VerifyReport::failures() const
{
    return static_cast<size_t>(std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return !c.ok; }));
}

namespace {

class Checker
{
public:
    explicit Checker(VerifyReport& r) : m_r(r) {}

    template <typename T>
    void exact(const std::string& name, const T& expected, const T& actual)
    {
        m_r.checks.push_back(VerifyCheck{name, show(expected), show(actual), expected == actual});
    }

    void usd(const std::string& name, UsdCents expected, UsdCents actual)
    {
        const int64_t diff = expected.cents() - actual.cents();
        m_r.checks.push_back(VerifyCheck{name, expected.str(), actual.str(), diff >= -1 && diff <= 1});
    }

    void real(const std::string& name, double expected, double actual)
    {
        m_r.checks.push_back(VerifyCheck{name, show(expected), show(actual), std::fabs(expected - actual) <= 1e-6});
    }

private:
    static std::string show(const std::string& s) { return s; }
    static std::string show(const char* s) { return s; }
    static std::string show(bool b) { return b ? "true" : "false"; }
    static std::string show(Amount a) { return std::to_string(a.sat()); }
    static std::string show(double d)
    {
        std::ostringstream o;
        o << std::fixed << std::setprecision(6) << d;
        return o.str();
    }
    template <typename T>
    static std::string show(const T& v)
        requires std::is_integral_v<T>
    {
        return std::to_string(v);
    }

    VerifyReport& m_r;
};

std::string entity_str(std::optional<Entity> e)
{
    return e ? std::string(entity_name(*e)) : "unlabeled";
}

} // namespace

VerifyReport verify_synth_dir(const std::filesystem::path& dir)
{
    const GroundTruth gt = GroundTruth::from_json(read_text_file(dir / "ground_truth.json"));
    const MessageRegistry registry = MessageRegistry::from_file(dir / "registry.json");
    const LabelTable external = load_labels_file(dir / "labels.csv");
    const PriceTable prices = load_prices_file(dir / "prices.csv");
    const LedgerIndex index = ingest_block_dir(dir / "blocks", Network::Regtest);
    const Analysis a = run_analysis(index, external, registry, &prices);

    VerifyReport report;
    Checker c(report);
    const IngestionReport ing = index.report();
    c.exact("ingest.blocks", gt.blocks, ing.blocks);
    c.exact("ingest.transactions", gt.transactions, ing.transactions);
    c.exact("ingest.missing_prevouts", size_t{0}, ing.missing_prevouts);
    c.exact("ingest.merkle_mismatches", size_t{0}, ing.merkle_mismatches);

    for (const auto& [d, v] : gt.daily_burns) {
        const auto it = a.burns.daily.find(d);
        c.exact("burns.daily." + d.str(), v, it == a.burns.daily.end() ? Amount(0) : it->second);
    }
    c.exact("burns.days", gt.daily_burns.size(), a.burns.daily.size());

    std::map<Date, size_t> by_date;
    size_t burn_txs = 0;
    Amount burned;
    BurnSeries campaign_series;
    for (const BurnRecord& r : a.burns.records) {
        if (!r.message_id) continue;
        campaign_series.records.push_back(r);
        if (r.value == Amount(0)) continue;
        ++by_date[r.date];
        ++burn_txs;
        burned += r.value;
    }
    for (const auto& [d, n] : gt.campaign_txs_by_date) c.exact("campaign.txs." + d.str(), n, by_date[d]);
    c.exact("campaign.burn_txs", gt.campaign_burn_txs, burn_txs);
    c.exact("campaign.burned_sat", gt.campaign_burned, burned);
    c.exact("campaign.unique_inputs", gt.campaign_unique_inputs, a.campaign.unique_inputs);
    for (const CampaignTruth& t : gt.campaign) {
        const CampaignRow* row = a.campaign.row(t.message_id);
        const CampaignRow empty;
        const CampaignRow& r = row ? *row : empty;
        const std::string p = "campaign." + t.message_id + ".";
        c.exact(p + "tx_count", t.tx_count, r.tx_count);
        c.exact(p + "burned_sat", t.burned, r.burned);
        c.exact(p + "unique_inputs", t.unique_inputs, r.unique_inputs);
        c.exact(p + "unique_addresses", t.unique_addresses, r.unique_addresses);
        c.exact(p + "first_timestamp", t.first_time, r.first_time);
        c.exact(p + "last_timestamp", t.last_time, r.last_time);
    }
    const auto senders = burn_by_sender(campaign_series);
    for (const auto& [addr, v] : gt.pinned_sender_burns) {
        const auto it = senders.find(addr);
        c.exact("campaign.sender." + addr, v, it == senders.end() ? Amount(0) : it->second);
    }

    if (gt.donation) {
        const DonationSummary& e = *gt.donation;
        const DonationSummary& d = a.donation;
        c.exact("donation.tx_count", e.tx_count, d.tx_count);
        c.exact("donation.total_outputs", e.total_outputs, d.total_outputs);
        c.exact("donation.donation_outputs", e.donation_outputs, d.donation_outputs);
        c.exact("donation.value_outputs", e.value_outputs, d.value_outputs);
        c.exact("donation.donated_sat", e.donated, d.donated);
        c.usd("donation.donated_usd", e.donated_usd, d.donated_usd);
        c.usd("donation.output_mean_usd", e.output_mean, d.output_mean);
        c.usd("donation.output_min_usd", e.output_min, d.output_min);
    }

    for (const PaymentRow& e : gt.payments) {
        const PaymentRow& r = a.payment_stats->row(e.entity);
        const std::string p = "payments." + std::string(entity_name(e.entity)) + ".";
        c.exact(p + "count", e.count, r.count);
        c.exact(p + "total_sat", e.total_sat, r.total_sat);
        c.usd(p + "total_usd", e.total, r.total);
        c.usd(p + "mean_usd", e.mean, r.mean);
        c.usd(p + "median_usd", e.median, r.median);
        c.usd(p + "min_usd", e.min, r.min);
        c.usd(p + "max_usd", e.max, r.max);
        c.exact(p + "outlier_count", e.outliers, r.outliers);
        c.usd(p + "outlier_mean_usd", e.outlier_mean, r.outlier_mean);
        c.usd(p + "outlier_min_usd", e.outlier_min, r.outlier_min);
        c.usd(p + "outlier_max_usd", e.outlier_max, r.outlier_max);
    }

    for (const ClusterRow& e : gt.clusters) {
        const ClusterRow& r = a.cluster_stats.row(e.entity);
        const std::string p = "clusters." + std::string(entity_name(e.entity)) + ".";
        c.exact(p + "addresses", e.addresses, r.addresses);
        c.exact(p + "clusters", e.clusters, r.clusters);
        c.real(p + "size_mean", e.size_mean, r.size_mean);
        c.real(p + "size_std", e.size_std, r.size_std);
        c.real(p + "tx_mean", e.tx_mean, r.tx_mean);
        c.real(p + "tx_std", e.tx_std, r.tx_std);
    }
    c.exact("clusters.violations", size_t{0}, a.cluster_stats.violations.size());

    size_t label_mismatches = 0;
    std::string first_mismatch;
    for (const auto& [addr, e] : gt.labels) {
        const auto got = a.labels.entity_of(addr);
        if (got != e) {
            if (label_mismatches++ == 0) first_mismatch = addr + " " + std::string(entity_name(e)) + "/" + entity_str(got);
        }
    }
    for (const auto& [addr, _] : a.labels.entries()) {
        if (!gt.labels.count(addr) && label_mismatches++ == 0) first_mismatch = addr + " unexpected";
    }
    c.exact("labels.count", gt.labels.size(), a.labels.size());
    c.exact("labels.mismatches", size_t{0}, label_mismatches);
    if (label_mismatches) report.checks.back().actual += " (first: " + first_mismatch + ")";
    c.exact("labels.conflicts", size_t{0}, a.labels.conflicts().size());

    if (gt.trace) {
        const PeelTrace t = trace_peel_chain(index, gt.trace->start, 64, PeelHeuristic::Largest, a.labels);
        c.exact("trace.hops", gt.trace->hops.size(), t.hops.size());
        c.exact("trace.end", std::string(peel_end_name(gt.trace->end)), std::string(peel_end_name(t.end)));
        for (size_t i = 0; i < std::min(t.hops.size(), gt.trace->hops.size()); ++i) {
            const PeelHop& e = gt.trace->hops[i];
            const PeelHop& h = t.hops[i];
            const std::string p = "trace.hop" + std::to_string(i) + ".";
            c.exact(p + "txid", e.txid.display(), h.txid.display());
            c.exact(p + "vout", e.vout, h.vout);
            c.exact(p + "value_sat", e.value, h.value);
        }
    }

    if (gt.counterparty_address) {
        const auto rows = counterparty_report(index, a.labels, *gt.counterparty_address, &prices);
        c.exact("counterparty.rows", gt.counterparty.size(), rows.size());
        for (size_t i = 0; i < std::min(rows.size(), gt.counterparty.size()); ++i) {
            const CounterpartyRow& e = gt.counterparty[i];
            const CounterpartyRow& r = rows[i];
            const std::string p = "counterparty." + std::to_string(i) + ".";
            c.exact(p + "txid", e.txid.display(), r.txid.display());
            c.exact(p + "entity", std::string(entity_name(e.entity)), std::string(entity_name(r.entity)));
            c.exact(p + "value_sat", e.value, r.value);
            c.exact(p + "priced", e.usd.has_value(), r.usd.has_value());
            if (e.usd && r.usd) c.usd(p + "usd", *e.usd, *r.usd);
        }
    }

    if (gt.fanout) {
        const IndexedTx* itx = index.find(gt.fanout->txid);
        c.exact("fanout.present", true, itx != nullptr);
        if (itx) {
            c.exact("fanout.inputs", gt.fanout->inputs, itx->tx.inputs.size());
            c.exact("fanout.outputs", gt.fanout->outputs, itx->tx.outputs.size());
            Amount total;
            bool uniform = true;
            for (const TxOutput& o : itx->tx.outputs) {
                total += o.value;
                uniform = uniform && o.value == gt.fanout->per_output;
            }
            c.exact("fanout.total_sat", gt.fanout->total, total);
            c.exact("fanout.uniform_outputs", true, uniform);
        }
    }
    return report;
}

} // namespace burnscope
