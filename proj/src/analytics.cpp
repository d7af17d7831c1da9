// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/analytics.hpp>
#include <burnscope/error.hpp>
#include <burnscope/stats.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace burnscope {

namespace {

constexpr int64_t SECONDS_PER_DAY = 86400;

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string dot_quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

UsdCents round_cents(double cents)
{
    return UsdCents(static_cast<int64_t>(std::floor(cents + 0.5)));
}

} // namespace

Amount BurnSeries::total() const
{
    Amount sum;
    for (const auto& [_, v] : daily) sum += v;
    return sum;
}

BurnSeries burn_series(const LedgerIndex& index, const DateRange& range, bool campaign_only,
                       const MessageRegistry& registry)
{
    BurnSeries out;
    for (const IndexedTx& itx : index.transactions()) {
        const Date date = Date::from_unix(itx.time);
        if (!range.contains(date)) continue;
        bool any = false;
        BurnRecord rec;
        for (size_t v = 0; v < itx.tx.outputs.size(); ++v) {
            const TxOutput& o = itx.tx.outputs[v];
            if (o.script_pubkey.empty() || o.script_pubkey[0] != OP_RETURN) continue;
            const ScriptClass cls = classify_script(o.script_pubkey);
            rec.value += o.value;
            CalloutText text = decode_payload_text(cls.payload);
            if (!any) {
                rec.payload = cls.payload;
                rec.text = text;
                rec.standard = cls.standard;
            }
            if (!rec.message_id) {
                if (const auto c = match_callout(text, registry)) rec.message_id = c->message_id;
            }
            any = true;
        }
        if (!any) continue;
        if (campaign_only && !rec.message_id) continue;
        rec.txid = itx.id;
        rec.time = itx.time;
        rec.date = date;
        if (!itx.tx.is_coinbase()) {
            if (const IndexedOutput* prev = index.output(itx.tx.inputs[0].previous)) {
                rec.first_input_address = prev->address;
            }
        }
        out.daily[date] += rec.value;
        out.records.push_back(std::move(rec));
    }
    return out;
}

std::map<std::string, Amount> burn_by_sender(const BurnSeries& series)
{
    std::map<std::string, Amount> out;
    for (const BurnRecord& r : series.records) {
        if (r.first_input_address) out[*r.first_input_address] += r.value;
    }
    return out;
}

double mean_daily_burn(const BurnSeries& series, const DateRange& range)
{
    if (!range.from && !range.to && series.daily.empty()) return 0.0;
    const Date from = range.from ? *range.from : series.daily.begin()->first;
    const Date to = range.to ? *range.to : series.daily.rbegin()->first;
    if (to < from) return 0.0;
    const int64_t days = (to.to_unix() - from.to_unix()) / SECONDS_PER_DAY + 1;
    long double sum = 0;
    for (const auto& [d, v] : series.daily) {
        if (d >= from && d <= to) sum += static_cast<long double>(v.sat());
    }
    return static_cast<double>(sum / days);
}

std::vector<std::pair<Date, Amount>> top_days(const BurnSeries& series, size_t n)
{
    std::vector<std::pair<Date, Amount>> v(series.daily.begin(), series.daily.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (v.size() > n) v.resize(n);
    return v;
}

const CampaignRow* CampaignSummary::row(std::string_view message_id) const
{
    for (const CampaignRow& r : rows) {
        if (r.message_id == message_id) return &r;
    }
    return nullptr;
}

CampaignSummary campaign_summary(const LedgerIndex& index, const MessageRegistry& registry)
{
    const BurnSeries series = burn_series(index, {}, true, registry);
    std::map<std::string, CampaignRow> rows;
    std::map<std::string, std::set<std::string>> addrs;
    std::map<std::string, std::set<std::string>> inputs;
    std::set<std::string> all_addrs;
    std::set<std::string> all_inputs;
    for (const BurnRecord& rec : series.records) {
        const std::string& id = *rec.message_id;
        CampaignRow& row = rows[id];
        if (row.tx_count == 0) {
            row.first_time = rec.time;
            row.last_time = rec.time;
        }
        ++row.tx_count;
        row.first_time = std::min(row.first_time, rec.time);
        row.last_time = std::max(row.last_time, rec.time);
        row.burned += rec.value;
        const ResolvedTransaction tx = index.resolve(rec.txid);
        for (const std::string& a : tx.input_addresses()) {
            inputs[id].insert(a);
            addrs[id].insert(a);
            all_inputs.insert(a);
            all_addrs.insert(a);
        }
        for (const std::string& a : tx.output_addresses()) {
            addrs[id].insert(a);
            all_addrs.insert(a);
        }
    }

    CampaignSummary out;
    const auto emit = [&](const std::string& id, const std::string& text) {
        CampaignRow row;
        if (const auto it = rows.find(id); it != rows.end()) row = it->second;
        row.message_id = id;
        row.text = text;
        row.unique_addresses = addrs[id].size();
        row.unique_inputs = inputs[id].size();
        out.tx_count += row.tx_count;
        out.burned += row.burned;
        out.rows.push_back(std::move(row));
    };
    for (const RegistryMessage& m : registry.messages()) emit(m.id, m.text);
    for (const auto& [id, _] : rows) {
        if (!registry.find_id(id)) emit(id, id);
    }
    out.unique_addresses = all_addrs.size();
    out.unique_inputs = all_inputs.size();
    return out;
}

std::string_view tx_class_name(TxClass c)
{
    switch (c) {
    case TxClass::Burn: return "burn";
    case TxClass::Payment: return "payment";
    case TxClass::Funding: return "funding";
    case TxClass::Donation: return "donation";
    case TxClass::External: return "external";
    }
    return "external";
}

Classification classify_transaction(const ResolvedTransaction& tx, const LabelTable& labels,
                                    const MessageRegistry& registry)
{
    Classification out;
    if (tx.coinbase) return out;
    out.callout = transaction_callout(tx, registry);
    const Amount burned = tx.op_return_value();
    const auto label_of = [&](const std::optional<std::string>& a) -> std::optional<Entity> {
        if (!a) return std::nullopt;
        return labels.entity_of(*a);
    };

    if (out.callout && burned > Amount(0)) {
        out.cls = TxClass::Burn;
        return out;
    }
    if (out.callout && tx.has_op_return()) {
        for (const ResolvedOutput& o : tx.outputs) {
            if (label_of(o.address) == Entity::DONATION) {
                out.cls = TxClass::Donation;
                return out;
            }
        }
    }

    bool all_agency = !tx.inputs.empty();
    bool all_unlabeled_or_mixer = true;
    for (const ResolvedInput& in : tx.inputs) {
        const auto e = label_of(in.address);
        if (!e || !is_agency(*e)) all_agency = false;
        if (e && *e != Entity::MIXER) all_unlabeled_or_mixer = false;
    }
    if (burned == Amount(0) && all_agency) {
        const std::set<std::string> change = tx.input_addresses();
        for (const ResolvedOutput& o : tx.outputs) {
            if (!o.address || change.count(*o.address)) continue;
            const auto e = label_of(o.address);
            if (e && is_agency(*e)) {
                out.cls = TxClass::Payment;
                return out;
            }
        }
    }
    if (all_unlabeled_or_mixer) {
        for (const ResolvedOutput& o : tx.outputs) {
            if (label_of(o.address)) {
                out.cls = TxClass::Funding;
                return out;
            }
        }
    }
    return out;
}

std::vector<Payment> collect_payments(const std::vector<ResolvedTransaction>& txs, const LabelTable& labels,
                                      const MessageRegistry& registry, uint64_t dust_threshold)
{
    std::vector<Payment> out;
    for (const ResolvedTransaction& tx : txs) {
        if (classify_transaction(tx, labels, registry).cls != TxClass::Payment) continue;
        const std::set<std::string> change = tx.input_addresses();
        std::string sender;
        for (const ResolvedInput& in : tx.inputs) {
            if (in.address) {
                sender = *in.address;
                break;
            }
        }
        for (Entity e : AGENCIES) {
            Payment p;
            p.txid = tx.txid;
            p.time = tx.time;
            p.entity = e;
            p.sender = sender;
            p.dust = true;
            for (const ResolvedOutput& o : tx.outputs) {
                if (!o.address || change.count(*o.address) || labels.entity_of(*o.address) != e) continue;
                p.receivers.emplace_back(*o.address, o.value);
                p.value += o.value;
                if (o.value.sat() >= dust_threshold) p.dust = false;
            }
            if (!p.receivers.empty()) out.push_back(std::move(p));
        }
    }
    return out;
}

int64_t div_round(int64_t numerator, int64_t denominator)
{
    if (denominator <= 0) return 0;
    return (numerator * 2 + denominator) / (denominator * 2);
}

const PaymentRow& PaymentStats::row(Entity e) const
{
    for (const PaymentRow& r : rows) {
        if (r.entity == e) return r;
    }
    fail(Errc::BadConfig, "no payment row for " + std::string(entity_name(e)));
}

PaymentStats payment_stats(const std::vector<Payment>& payments, const PriceTable& prices)
{
    PaymentStats st;
    for (const Payment& p : payments) {
        st.priced.push_back(PricedPayment{p, usd_value(p.value, Date::from_unix(p.time), prices), false});
    }
    for (Entity e : AGENCIES) {
        PaymentRow row;
        row.entity = e;
        std::vector<size_t> idx;
        std::vector<double> cents;
        for (size_t i = 0; i < st.priced.size(); ++i) {
            if (st.priced[i].payment.entity != e) continue;
            idx.push_back(i);
            cents.push_back(static_cast<double>(st.priced[i].usd.cents()));
        }
        row.count = idx.size();
        if (!idx.empty()) {
            const stats::Fences fences = stats::tukey_fences(cents);
            int64_t total = 0;
            int64_t out_total = 0;
            int64_t lo = INT64_MAX;
            int64_t hi = INT64_MIN;
            int64_t out_lo = INT64_MAX;
            int64_t out_hi = INT64_MIN;
            for (size_t i : idx) {
                PricedPayment& pp = st.priced[i];
                const int64_t c = pp.usd.cents();
                total += c;
                row.total_sat += pp.payment.value;
                lo = std::min(lo, c);
                hi = std::max(hi, c);
                if (pp.payment.dust) ++row.dust;
                pp.outlier = stats::is_outlier(fences, static_cast<double>(c));
                if (pp.outlier) {
                    ++row.outliers;
                    out_total += c;
                    out_lo = std::min(out_lo, c);
                    out_hi = std::max(out_hi, c);
                }
            }
            row.total = UsdCents(total);
            row.mean = UsdCents(div_round(total, static_cast<int64_t>(idx.size())));
            row.median = round_cents(stats::quantile(cents, 0.5));
            row.min = UsdCents(lo);
            row.max = UsdCents(hi);
            if (row.outliers) {
                row.outlier_mean = UsdCents(div_round(out_total, static_cast<int64_t>(row.outliers)));
                row.outlier_min = UsdCents(out_lo);
                row.outlier_max = UsdCents(out_hi);
            }
        }
        st.rows.push_back(row);
    }
    return st;
}

std::string_view peel_heuristic_name(PeelHeuristic h)
{
    return h == PeelHeuristic::Largest ? "largest" : "unlabeled";
}

std::optional<PeelHeuristic> parse_peel_heuristic(std::string_view name)
{
    if (name == "largest") return PeelHeuristic::Largest;
    if (name == "unlabeled") return PeelHeuristic::Unlabeled;
    return std::nullopt;
}

std::string_view peel_end_name(PeelEnd e)
{
    switch (e) {
    case PeelEnd::MaxHops: return "max_hops";
    case PeelEnd::NoSuccessor: return "no_successor";
    case PeelEnd::ReachedLabeled: return "reached_labeled";
    }
    return "no_successor";
}

PeelTrace trace_peel_chain(const LedgerIndex& index, const OutPoint& start, size_t max_hops,
                           PeelHeuristic heuristic, const LabelTable& labels)
{
    if (!index.output(start)) fail(Errc::UnknownTx, "start output not indexed: " + start.str());
    PeelTrace trace;
    trace.start = start;
    if (max_hops == 0) {
        trace.end = PeelEnd::MaxHops;
        return trace;
    }
    OutPoint cur = start;
    while (true) {
        const auto spender = index.spender(cur);
        if (!spender) {
            trace.end = PeelEnd::NoSuccessor;
            return trace;
        }
        const IndexedTx* itx = index.find(*spender);
        std::optional<uint32_t> pick;
        Amount best;
        for (uint32_t v = 0; v < itx->tx.outputs.size(); ++v) {
            const IndexedOutput* o = index.output(OutPoint{itx->id, v});
            if (o->kind == ScriptKind::OpReturn) continue;
            if (heuristic == PeelHeuristic::Unlabeled && (!o->address || labels.contains(*o->address))) continue;
            if (!pick || o->value > best) {
                pick = v;
                best = o->value;
            }
        }
        if (!pick) {
            trace.end = PeelEnd::NoSuccessor;
            return trace;
        }
        const IndexedOutput* o = index.output(OutPoint{itx->id, *pick});
        trace.hops.push_back(PeelHop{itx->id, *pick, o->value, o->address});
        if (o->address && labels.contains(*o->address)) {
            trace.end = PeelEnd::ReachedLabeled;
            return trace;
        }
        if (trace.hops.size() >= max_hops) {
            trace.end = PeelEnd::MaxHops;
            return trace;
        }
        cur = OutPoint{itx->id, *pick};
    }
}

std::vector<CounterpartyRow> counterparty_report(const LedgerIndex& index, const LabelTable& labels,
                                                 const std::string& address, const PriceTable* prices)
{
    std::vector<CounterpartyRow> rows;
    const std::optional<Entity> own = labels.entity_of(address);
    const auto foreign = [&](const std::string& a) -> std::optional<Entity> {
        if (a == address) return std::nullopt;
        const auto e = labels.entity_of(a);
        if (!e || e == own) return std::nullopt;
        return e;
    };
    std::set<TxId> seen;
    for (const HistoryEntry& h : index.history(address)) {
        if (!seen.insert(h.txid).second) continue;
        const ResolvedTransaction tx = index.resolve(h.txid);
        const std::set<std::string> ins = tx.input_addresses();
        const Date date = Date::from_unix(tx.time);
        const auto priced = [&](Amount v) -> std::optional<UsdCents> {
            if (!prices || !prices->covers(date)) return std::nullopt;
            return usd_value(v, date, *prices);
        };
        if (ins.count(address)) {
            std::map<std::string, Amount> sent;
            for (const ResolvedOutput& o : tx.outputs) {
                if (o.address && foreign(*o.address)) sent[*o.address] += o.value;
            }
            for (const auto& [cp, v] : sent) {
                rows.push_back(CounterpartyRow{tx.time, tx.txid, cp, *foreign(cp), Direction::Out, v, priced(v)});
            }
        } else {
            Amount received;
            for (const ResolvedOutput& o : tx.outputs) {
                if (o.address == address) received += o.value;
            }
            for (const std::string& cp : ins) {
                if (const auto e = foreign(cp)) {
                    rows.push_back(CounterpartyRow{tx.time, tx.txid, cp, *e, Direction::In, received, priced(received)});
                }
            }
        }
    }
    return rows;
}

DonationSummary donation_report(const std::vector<ResolvedTransaction>& txs, const MessageRegistry& registry,
                                const LabelTable& labels, const PriceTable& prices)
{
    DonationSummary out;
    if (labels.addresses_of(Entity::DONATION).empty()) return out;
    int64_t output_cents = 0;
    int64_t min_cents = INT64_MAX;
    for (const ResolvedTransaction& tx : txs) {
        if (classify_transaction(tx, labels, registry).cls != TxClass::Donation) continue;
        const Date date = Date::from_unix(tx.time);
        ++out.tx_count;
        out.txids.push_back(tx.txid);
        out.total_outputs += tx.outputs.size();
        Amount donated;
        for (const ResolvedOutput& o : tx.outputs) {
            if (o.kind == ScriptKind::OpReturn) continue;
            ++out.value_outputs;
            const int64_t c = usd_value(o.value, date, prices).cents();
            output_cents += c;
            min_cents = std::min(min_cents, c);
            if (o.address && labels.entity_of(*o.address) == Entity::DONATION) {
                ++out.donation_outputs;
                donated += o.value;
            }
        }
        out.donated += donated;
        out.donated_usd += usd_value(donated, date, prices);
    }
    if (out.value_outputs) {
        out.output_mean = UsdCents(div_round(output_cents, static_cast<int64_t>(out.value_outputs)));
        out.output_min = UsdCents(min_cents);
    }
    return out;
}

PaymentGraph build_payment_graph(const std::vector<Payment>& payments, const LabelTable& labels)
{
    PaymentGraph g;
    std::set<std::string> nodes;
    for (const Payment& p : payments) {
        if (!p.sender.empty()) nodes.insert(p.sender);
        for (const auto& [to, v] : p.receivers) {
            nodes.insert(to);
            g.edges.push_back(GraphEdge{p.sender, to, v, p.time, p.txid});
        }
    }
    for (const std::string& a : nodes) g.nodes.push_back(GraphNode{a, labels.entity_of(a)});
    return g;
}

void export_graph_dot(const PaymentGraph& g, std::ostream& out)
{
    out << "// schema_version: " << SCHEMA_VERSION << "\n";
    out << "digraph payments {\n";
    for (const GraphNode& n : g.nodes) {
        out << "  " << dot_quote(n.address) << " [entity=" << dot_quote(n.entity ? entity_name(*n.entity) : "")
            << "];\n";
    }
    for (const GraphEdge& e : g.edges) {
        out << "  " << dot_quote(e.from) << " -> " << dot_quote(e.to) << " [value_sat=" << e.value.sat()
            << ", time=" << e.time << ", txid=" << dot_quote(e.txid.display()) << "];\n";
    }
    out << "}\n";
}

void export_graph_json(const PaymentGraph& g, std::ostream& out)
{
    nlohmann::ordered_json j;
    j["schema_version"] = SCHEMA_VERSION;
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const GraphNode& n : g.nodes) {
        nodes.push_back({{"address", n.address}, {"entity", n.entity ? entity_name(*n.entity) : ""}});
    }
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const GraphEdge& e : g.edges) {
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"value_sat", e.value.sat()},
                         {"value_btc", format_btc(e.value)},
                         {"timestamp", format_timestamp(e.time)},
                         {"txid", e.txid.display()}});
    }
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    out << j.dump(2) << "\n";
}

void export_timeline_csv(const PaymentStats& stats, std::ostream& out)
{
    out << SCHEMA_LINE << "timestamp,txid,usd_value,is_outlier\n";
    for (const PricedPayment& p : stats.priced) {
        out << format_timestamp(p.payment.time) << ',' << p.payment.txid.display() << ',' << p.usd.str() << ','
            << (p.outlier ? "true" : "false") << '\n';
    }
}

void export_timeline_svg(const PaymentStats& stats, std::ostream& out)
{
    constexpr double W = 800;
    constexpr double H = 400;
    constexpr double M = 40;
    uint32_t t0 = UINT32_MAX;
    uint32_t t1 = 0;
    int64_t vmax = 1;
    for (const PricedPayment& p : stats.priced) {
        t0 = std::min(t0, p.payment.time);
        t1 = std::max(t1, p.payment.time);
        vmax = std::max(vmax, p.usd.cents());
    }
    const double span = t1 > t0 ? static_cast<double>(t1 - t0) : 1.0;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" data-schema-version=\"" << SCHEMA_VERSION << "\">\n";
    out << "  <title>Payment timeline (USD)</title>\n";
    out << "  <line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
        << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
        << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << M << "\" y=\"" << M - 8 << "\" font-size=\"10\">max $"
        << xml_escape(UsdCents(vmax).str()) << "</text>\n";
    for (const PricedPayment& p : stats.priced) {
        const double x = M + (W - 2 * M) * static_cast<double>(p.payment.time - t0) / span;
        const double y = H - M - (H - 2 * M) * static_cast<double>(p.usd.cents()) / static_cast<double>(vmax);
        out << "  <circle class=\"" << (p.outlier ? "outlier" : "normal") << "\" cx=\"" << fixed(x, 2) << "\" cy=\""
            << fixed(y, 2) << "\" r=\"3\" fill=\"" << (p.outlier ? "#d62728" : "#1f77b4") << "\"/>\n";
    }
    out << "</svg>\n";
}

void export_burn_csv(const BurnSeries& series, std::ostream& out)
{
    out << SCHEMA_LINE << "date,burned_sat,burned_btc\n";
    for (const auto& [d, v] : series.daily) out << d.str() << ',' << v.sat() << ',' << format_btc(v) << '\n';
}

void export_burn_svg(const BurnSeries& series, std::ostream& out)
{
    constexpr double W = 800;
    constexpr double H = 400;
    constexpr double M = 40;
    uint64_t vmax = 1;
    for (const auto& [_, v] : series.daily) vmax = std::max(vmax, v.sat());
    const size_t n = std::max<size_t>(series.daily.size(), 1);
    const double bar = (W - 2 * M) / static_cast<double>(n);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" data-schema-version=\"" << SCHEMA_VERSION << "\">\n";
    out << "  <title>BTC burned to OP_RETURN per day</title>\n";
    size_t i = 0;
    for (const auto& [d, v] : series.daily) {
        const double h = (H - 2 * M) * static_cast<double>(v.sat()) / static_cast<double>(vmax);
        out << "  <rect x=\"" << fixed(M + bar * static_cast<double>(i), 2) << "\" y=\"" << fixed(H - M - h, 2)
            << "\" width=\"" << fixed(std::max(bar - 1, 1.0), 2) << "\" height=\"" << fixed(h, 2)
            << "\" fill=\"#ff7f0e\"><title>" << d.str() << ' ' << format_btc(v) << " BTC</title></rect>\n";
        ++i;
    }
    out << "</svg>\n";
}

} // namespace burnscope
