// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/cli.hpp>
#include <burnscope/error.hpp>
#include <burnscope/pipeline.hpp>
#include <burnscope/synth.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace burnscope::cli {

using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string blockdir;
    std::string index;
    std::string labels;
    std::string registry;
    std::string prices;
    std::string scenario;
    std::string out;
    std::string network{"mainnet"};
    std::string from;
    std::string to;
    std::string start;
    std::string heuristic{"largest"};
    std::string address;
    bool campaign_only{false};
    bool include_hacker_phase{false};
    bool mean_daily{false};
    uint64_t dust_threshold{DEFAULT_DUST_THRESHOLD};
    size_t max_hops{64};
    unsigned threads{0};
};

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

json amount_json(Amount a)
{
    return json{{"sat", a.sat()}, {"btc", format_btc(a)}};
}

Date flag_date(const std::string& text, const char* flag)
{
    try {
        return Date::parse(text);
    } catch (const Error&) {
        throw UsageError(std::string(flag) + " expects YYYY-MM-DD, got '" + text + "'");
    }
}

DateRange flag_range(const Options& o)
{
    DateRange r;
    if (!o.from.empty()) r.from = flag_date(o.from, "--from");
    if (!o.to.empty()) r.to = flag_date(o.to, "--to");
    if (r.from && r.to && *r.to < *r.from) throw UsageError("--to precedes --from");
    return r;
}

Network flag_network(const std::string& name)
{
    const auto n = parse_network(name);
    if (!n) throw UsageError("unknown network '" + name + "'");
    return *n;
}

LedgerIndex load_index(const Options& o)
{
    return LedgerIndex::from_snapshot(ByteSpan(read_file(o.index)));
}

MessageRegistry load_registry(const Options& o)
{
    return o.registry.empty() ? MessageRegistry::defaults() : MessageRegistry::from_file(o.registry);
}

LabelTable load_external(const Options& o)
{
    return o.labels.empty() ? LabelTable{} : load_labels_file(o.labels);
}

AnalysisOptions analysis_options(const Options& o)
{
    AnalysisOptions a;
    a.dust_threshold = o.dust_threshold;
    a.exclude_hacker_phase = !o.include_hacker_phase;
    return a;
}

std::filesystem::path out_dir(const Options& o)
{
    std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    return dir;
}

template <typename F>
void write_stream(const std::filesystem::path& path, F&& fn)
{
    std::ostringstream s;
    fn(s);
    write_file(path, s.str());
}

json report_json(const IngestionReport& r)
{
    return json{{"schema_version", SCHEMA_VERSION},
                {"blocks", r.blocks},
                {"transactions", r.transactions},
                {"inputs", r.inputs},
                {"outputs", r.outputs},
                {"op_return_outputs", r.op_return_outputs},
                {"missing_prevouts", r.missing_prevouts},
                {"merkle_mismatches", r.merkle_mismatches}};
}

int cmd_ingest(const Options& o, std::ostream& out)
{
    const LedgerIndex index = ingest_block_dir(o.blockdir, flag_network(o.network), o.threads);
    write_file(o.index, ByteSpan(index.snapshot()));
    if (!o.out.empty()) {
        write_stream(out_dir(o) / "outputs.csv", [&](std::ostream& s) { index.export_outputs_csv(s); });
    }
    out << dump(report_json(index.report()));
    return EXIT_OK;
}

void export_records_csv(const BurnSeries& series, std::ostream& s)
{
    s << SCHEMA_LINE << "txid,timestamp,value_sat,value_btc,standard,encoding,message_id,first_input_address,text\n";
    for (const BurnRecord& r : series.records) {
        s << r.txid.display() << ',' << format_timestamp(r.time) << ',' << r.value.sat() << ',' << format_btc(r.value)
          << ',' << (r.standard ? "true" : "false") << ',' << text_encoding_name(r.text.encoding) << ','
          << csv_escape(r.message_id.value_or("")) << ',' << r.first_input_address.value_or("") << ','
          << csv_escape(r.text.decoded) << '\n';
    }
}

int cmd_scan(const Options& o, std::ostream& out)
{
    const DateRange range = flag_range(o);
    const LedgerIndex index = load_index(o);
    const MessageRegistry registry = load_registry(o);
    const BurnSeries series = burn_series(index, range, o.campaign_only, registry);
    if (!o.out.empty()) {
        const auto dir = out_dir(o);
        write_stream(dir / "opreturn.csv", [&](std::ostream& s) { export_records_csv(series, s); });
        write_stream(dir / "burns.csv", [&](std::ostream& s) { export_burn_csv(series, s); });
        write_stream(dir / "burns.svg", [&](std::ostream& s) { export_burn_svg(series, s); });
    }
    json j;
    j["schema_version"] = SCHEMA_VERSION;
    j["campaign_only"] = o.campaign_only;
    j["records"] = series.records.size();
    j["total"] = amount_json(series.total());
    if (o.mean_daily) {
        DateRange span = range;
        if (!series.daily.empty()) {
            if (!span.from) span.from = series.daily.begin()->first;
            if (!span.to) span.to = series.daily.rbegin()->first;
        }
        std::ostringstream m;
        m << std::fixed << std::setprecision(8) << mean_daily_burn(series, span) / static_cast<double>(COIN);
        j["mean_daily_btc"] = m.str();
    }
    json days = json::array();
    for (const auto& [d, v] : series.daily) {
        days.push_back(json{{"date", d.str()}, {"burned_sat", v.sat()}, {"burned_btc", format_btc(v)}});
    }
    j["daily"] = std::move(days);
    out << dump(j);
    return EXIT_OK;
}

json cluster_row_json(const ClusterRow& r)
{
    std::ostringstream f;
    const auto fixed6 = [&](double v) {
        f.str("");
        f << std::fixed << std::setprecision(6) << v;
        return f.str();
    };
    return json{{"entity", entity_name(r.entity)},
                {"addresses", r.addresses},
                {"clusters", r.clusters},
                {"cluster_size_avg", fixed6(r.size_mean)},
                {"cluster_size_std", fixed6(r.size_std)},
                {"transactions_avg", fixed6(r.tx_mean)},
                {"transactions_std", fixed6(r.tx_std)}};
}

int cmd_attrib(const Options& o, std::ostream& out)
{
    const LedgerIndex index = load_index(o);
    const Analysis a = run_analysis(index, load_external(o), load_registry(o), nullptr, analysis_options(o));
    if (!o.out.empty()) {
        const auto dir = out_dir(o);
        write_stream(dir / "labels.csv", [&](std::ostream& s) { export_labels(a.labels, s); });
        write_stream(dir / "clusters.csv", [&](std::ostream& s) { export_clusters(a.clusters, a.labels, s); });
        write_stream(dir / "cluster_stats.csv", [&](std::ostream& s) {
            s << SCHEMA_LINE << "entity,addresses,clusters,cluster_size_avg,cluster_size_std,transactions_avg,transactions_std\n";
            for (const ClusterRow& r : a.cluster_stats.rows) {
                const json row = cluster_row_json(r);
                s << row["entity"].get<std::string>() << ',' << r.addresses << ',' << r.clusters << ','
                  << row["cluster_size_avg"].get<std::string>() << ',' << row["cluster_size_std"].get<std::string>()
                  << ',' << row["transactions_avg"].get<std::string>() << ','
                  << row["transactions_std"].get<std::string>() << '\n';
            }
        });
    }
    json j;
    j["schema_version"] = SCHEMA_VERSION;
    j["labels"] = a.labels.size();
    j["cluster_propagated"] = a.cluster_propagated;
    j["excluded_transactions"] = a.exclusions.size();
    j["total_clusters"] = a.cluster_stats.total_clusters;
    json rows = json::array();
    for (const ClusterRow& r : a.cluster_stats.rows) rows.push_back(cluster_row_json(r));
    j["entities"] = std::move(rows);
    j["violations"] = a.cluster_stats.violations;
    json conflicts = json::array();
    for (const LabelConflict& c : a.labels.conflicts()) {
        conflicts.push_back(json{{"address", c.address},
                                 {"kept", entity_name(c.kept.entity)},
                                 {"rejected", entity_name(c.rejected.entity)},
                                 {"txid", c.txid ? json(c.txid->display()) : json(nullptr)}});
    }
    j["conflicts"] = std::move(conflicts);
    out << dump(j);
    return EXIT_OK;
}

int cmd_campaign(const Options& o, std::ostream& out)
{
    const LedgerIndex index = load_index(o);
    const CampaignSummary s = campaign_summary(index, load_registry(o));
    if (!o.out.empty()) {
        write_stream(out_dir(o) / "campaign.csv", [&](std::ostream& f) {
            f << SCHEMA_LINE << "message_id,text,tx_count,first_timestamp,last_timestamp,burned_sat,burned_btc,unique_addresses,unique_inputs\n";
            for (const CampaignRow& r : s.rows) {
                f << csv_escape(r.message_id) << ',' << csv_escape(r.text) << ',' << r.tx_count << ','
                  << (r.tx_count ? format_timestamp(r.first_time) : "") << ','
                  << (r.tx_count ? format_timestamp(r.last_time) : "") << ',' << r.burned.sat() << ','
                  << format_btc(r.burned) << ',' << r.unique_addresses << ',' << r.unique_inputs << '\n';
            }
        });
    }
    json j;
    j["schema_version"] = SCHEMA_VERSION;
    json rows = json::array();
    for (const CampaignRow& r : s.rows) {
        rows.push_back(json{{"message_id", r.message_id},
                            {"text", r.text},
                            {"tx_count", r.tx_count},
                            {"first_timestamp", r.tx_count ? json(format_timestamp(r.first_time)) : json(nullptr)},
                            {"last_timestamp", r.tx_count ? json(format_timestamp(r.last_time)) : json(nullptr)},
                            {"burned", amount_json(r.burned)},
                            {"unique_addresses", r.unique_addresses},
                            {"unique_inputs", r.unique_inputs}});
    }
    j["messages"] = std::move(rows);
    j["tx_count"] = s.tx_count;
    j["burned"] = amount_json(s.burned);
    j["unique_addresses"] = s.unique_addresses;
    j["unique_inputs"] = s.unique_inputs;
    out << dump(j);
    return EXIT_OK;
}

json payment_row_json(const PaymentRow& r)
{
    return json{{"entity", entity_name(r.entity)},
                {"count", r.count},
                {"total_sat", r.total_sat.sat()},
                {"total_usd", r.total.str()},
                {"mean_usd", r.mean.str()},
                {"median_usd", r.median.str()},
                {"min_usd", r.min.str()},
                {"max_usd", r.max.str()},
                {"outliers", r.outliers},
                {"outlier_mean_usd", r.outlier_mean.str()},
                {"outlier_min_usd", r.outlier_min.str()},
                {"outlier_max_usd", r.outlier_max.str()},
                {"dust_payments", r.dust}};
}

int cmd_payments(const Options& o, std::ostream& out)
{
    const PriceTable prices = load_prices_file(o.prices);
    const LedgerIndex index = load_index(o);
    const LabelTable external = load_external(o);
    const MessageRegistry registry = load_registry(o);
    const Analysis a = run_analysis(index, external, registry, &prices, analysis_options(o));
    const PaymentStats& stats = *a.payment_stats;
    if (!o.out.empty()) {
        const auto dir = out_dir(o);
        const PaymentGraph g = build_payment_graph(a.payments, a.labels);
        write_stream(dir / "timeline.csv", [&](std::ostream& s) { export_timeline_csv(stats, s); });
        write_stream(dir / "timeline.svg", [&](std::ostream& s) { export_timeline_svg(stats, s); });
        write_stream(dir / "graph.dot", [&](std::ostream& s) { export_graph_dot(g, s); });
        write_stream(dir / "graph.json", [&](std::ostream& s) { export_graph_json(g, s); });
        write_stream(dir / "payments.csv", [&](std::ostream& s) {
            s << SCHEMA_LINE << "timestamp,txid,entity,sender,value_sat,usd_value,is_outlier,dust\n";
            for (const PricedPayment& p : stats.priced) {
                s << format_timestamp(p.payment.time) << ',' << p.payment.txid.display() << ','
                  << entity_name(p.payment.entity) << ',' << p.payment.sender << ',' << p.payment.value.sat() << ','
                  << p.usd.str() << ',' << (p.outlier ? "true" : "false") << ','
                  << (p.payment.dust ? "true" : "false") << '\n';
            }
        });
    }
    json j;
    j["schema_version"] = SCHEMA_VERSION;
    j["dust_threshold_sat"] = o.dust_threshold;
    json rows = json::array();
    for (const PaymentRow& r : stats.rows) rows.push_back(payment_row_json(r));
    j["entities"] = std::move(rows);
    const DonationSummary& d = a.donation;
    j["donation"] = json{{"tx_count", d.tx_count},
                         {"total_outputs", d.total_outputs},
                         {"donation_outputs", d.donation_outputs},
                         {"donated_sat", d.donated.sat()},
                         {"donated_usd", d.donated_usd.str()},
                         {"output_mean_usd", d.output_mean.str()},
                         {"output_min_usd", d.output_min.str()}};
    if (!o.address.empty()) {
        json cp = json::array();
        for (const CounterpartyRow& r : counterparty_report(index, a.labels, o.address, &prices)) {
            cp.push_back(json{{"timestamp", format_timestamp(r.time)},
                              {"txid", r.txid.display()},
                              {"counterparty", r.counterparty},
                              {"entity", entity_name(r.entity)},
                              {"direction", r.direction == Direction::Out ? "out" : "in"},
                              {"value_sat", r.value.sat()},
                              {"usd", r.usd ? json(r.usd->str()) : json(nullptr)}});
        }
        j["counterparty"] = json{{"address", o.address}, {"rows", std::move(cp)}};
    }
    out << dump(j);
    return EXIT_OK;
}

int cmd_trace(const Options& o, std::ostream& out)
{
    OutPoint start;
    try {
        start = OutPoint::parse(o.start);
    } catch (const Error&) {
        throw UsageError("--start expects txid:vout");
    }
    const auto heuristic = parse_peel_heuristic(o.heuristic);
    if (!heuristic) throw UsageError("--heuristic must be largest or unlabeled");
    const LedgerIndex index = load_index(o);
    LabelTable labels = load_external(o);
    if (!o.registry.empty() || !o.labels.empty()) {
        labels = run_analysis(index, labels, load_registry(o), nullptr, analysis_options(o)).labels;
    }
    const PeelTrace t = trace_peel_chain(index, start, o.max_hops, *heuristic, labels);
    json hops = json::array();
    for (const PeelHop& h : t.hops) {
        hops.push_back(json{{"txid", h.txid.display()},
                            {"vout", h.vout},
                            {"value", amount_json(h.value)},
                            {"address", h.address ? json(*h.address) : json(nullptr)}});
    }
    out << dump(json{{"schema_version", SCHEMA_VERSION},
                     {"start", t.start.str()},
                     {"heuristic", peel_heuristic_name(*heuristic)},
                     {"hops", std::move(hops)},
                     {"end", peel_end_name(t.end)}});
    return EXIT_OK;
}

int cmd_synth(const Options& o, std::ostream& out)
{
    const ChainScenario s = scenario_from_file(o.scenario);
    const SynthOutput built = build_scenario(s);
    write_synth_dir(s, built, o.out);
    out << dump(json{{"schema_version", SCHEMA_VERSION},
                     {"seed", s.seed},
                     {"blocks", built.truth.blocks},
                     {"transactions", built.truth.transactions},
                     {"out", o.out}});
    return EXIT_OK;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const VerifyReport r = verify_synth_dir(o.out);
    json mismatches = json::array();
    for (const VerifyCheck& c : r.checks) {
        if (!c.ok) mismatches.push_back(json{{"check", c.name}, {"expected", c.expected}, {"actual", c.actual}});
    }
    out << dump(json{{"schema_version", SCHEMA_VERSION},
                     {"checks", r.checks.size()},
                     {"failures", r.failures()},
                     {"mismatches", std::move(mismatches)},
                     {"ok", r.ok()}});
    return r.ok() ? EXIT_OK : EXIT_MISMATCH;
}

void error_json(std::ostream& err, std::string_view kind, const std::string& message)
{
    err << json{{"schema_version", SCHEMA_VERSION}, {"error", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"OP_RETURN burn and attribution forensics", "burnscope"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    const auto index_opt = [&](CLI::App* c) { c->add_option("--index", o.index, "Ledger index file")->required()->check(CLI::ExistingFile); };
    const auto registry_opt = [&](CLI::App* c) { c->add_option("--registry", o.registry, "Message registry JSON")->check(CLI::ExistingFile); };
    const auto labels_opt = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--labels", o.labels, "External label CSV")->check(CLI::ExistingFile);
        if (required) opt->required();
    };
    const auto exclusion_opt = [&](CLI::App* c) {
        c->add_flag("--include-hacker-phase", o.include_hacker_phase, "Keep callout transactions in co-spend clustering");
    };

    auto* ingest = app.add_subcommand("ingest", "Parse blk*.dat files and persist a ledger index");
    ingest->add_option("blockdir", o.blockdir, "Directory of blk*.dat files")->required()->check(CLI::ExistingDirectory);
    ingest->add_option("--index", o.index, "Index output path")->required();
    ingest->add_option("--network", o.network, "mainnet, testnet or regtest")->capture_default_str();
    ingest->add_option("--threads", o.threads, "Parser threads, 0 for all cores");
    ingest->add_option("--out", o.out, "Also write outputs.csv here");

    auto* scan = app.add_subcommand("scan-opreturn", "Per-transaction OP_RETURN records and daily burn series");
    index_opt(scan);
    registry_opt(scan);
    scan->add_option("--from", o.from, "First day, YYYY-MM-DD");
    scan->add_option("--to", o.to, "Last day, YYYY-MM-DD");
    scan->add_flag("--campaign-only", o.campaign_only, "Only transactions matching a registered callout");
    scan->add_flag("--mean-daily", o.mean_daily, "Report the mean burn per calendar day");
    scan->add_option("--out", o.out, "Directory for opreturn.csv, burns.csv and burns.svg");

    auto* attrib = app.add_subcommand("attrib", "Label propagation and co-spend clustering");
    index_opt(attrib);
    labels_opt(attrib, true);
    attrib->add_option("--registry", o.registry, "Message registry JSON")->required()->check(CLI::ExistingFile);
    exclusion_opt(attrib);
    attrib->add_option("--out", o.out, "Directory for labels.csv, clusters.csv and cluster_stats.csv");

    auto* campaign = app.add_subcommand("campaign", "Per-message campaign summary");
    index_opt(campaign);
    registry_opt(campaign);
    campaign->add_option("--out", o.out, "Directory for campaign.csv");

    auto* payments = app.add_subcommand("payments", "Payment statistics, timeline and payment graph");
    index_opt(payments);
    payments->add_option("--prices", o.prices, "Daily USD price CSV")->required()->check(CLI::ExistingFile);
    labels_opt(payments, false);
    registry_opt(payments);
    exclusion_opt(payments);
    payments->add_option("--dust-threshold", o.dust_threshold, "Dust threshold in satoshis")->capture_default_str();
    payments->add_option("--counterparty", o.address, "Also report counterparties of this address");
    payments->add_option("--out", o.out, "Directory for timeline, graph and payments files");

    auto* trace = app.add_subcommand("trace", "Follow a peel chain from an output");
    index_opt(trace);
    trace->add_option("--start", o.start, "Starting output txid:vout")->required();
    trace->add_option("--max-hops", o.max_hops, "Hop limit")->capture_default_str();
    trace->add_option("--heuristic", o.heuristic, "largest or unlabeled")->capture_default_str();
    labels_opt(trace, false);
    registry_opt(trace);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic regtest chain and its ground truth");
    synth->add_option("--scenario", o.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    synth->add_option("--out", o.out, "Output directory")->required();

    auto* verify = app.add_subcommand("verify", "Re-run the pipeline on a synth directory and diff the ground truth");
    verify->add_option("--out", o.out, "Synth output directory")->required()->check(CLI::ExistingDirectory);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return EXIT_OK;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return EXIT_OK;
    } catch (const CLI::ParseError& e) {
        error_json(err, "usage", e.what());
        return EXIT_USAGE;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(o, out);
        if (scan->parsed()) return cmd_scan(o, out);
        if (attrib->parsed()) return cmd_attrib(o, out);
        if (campaign->parsed()) return cmd_campaign(o, out);
        if (payments->parsed()) return cmd_payments(o, out);
        if (trace->parsed()) return cmd_trace(o, out);
        if (synth->parsed()) return cmd_synth(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
    } catch (const UsageError& e) {
        error_json(err, "usage", e.what());
        return EXIT_USAGE;
    } catch (const Error& e) {
        error_json(err, errc_name(e.code()), e.what());
        return EXIT_DATA;
    } catch (const std::filesystem::filesystem_error& e) {
        error_json(err, errc_name(Errc::Io), e.what());
        return EXIT_DATA;
    }
    error_json(err, "usage", "no command");
    return EXIT_USAGE;
}

} // namespace burnscope::cli
