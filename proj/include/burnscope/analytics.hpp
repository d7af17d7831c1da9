// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_ANALYTICS_HPP
#define BURNSCOPE_ANALYTICS_HPP

#include <burnscope/attrib.hpp>
#include <burnscope/ledger.hpp>
#include <burnscope/prices.hpp>

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace burnscope {

inline constexpr uint64_t DEFAULT_DUST_THRESHOLD = 1000;

struct DateRange {
    std::optional<Date> from;
    std::optional<Date> to;

    bool contains(Date d) const { return (!from || d >= *from) && (!to || d <= *to); }
};

struct BurnRecord {
    TxId txid;
    uint32_t time{0};
    Date date;
    /** Σ of the transaction's OP_RETURN output values. */
    Amount value;
    /** Payload of the first OP_RETURN output. */
    Bytes payload;
    CalloutText text;
    bool standard{false};
    std::optional<std::string> message_id;
    std::optional<std::string> first_input_address;
};

struct BurnSeries {
    /** Every day holding at least one OP_RETURN output, including zero-value ones. */
    std::map<Date, Amount> daily;
    std::vector<BurnRecord> records;

    Amount total() const;
};

BurnSeries burn_series(const LedgerIndex& index, const DateRange& range, bool campaign_only,
                       const MessageRegistry& registry);

/** Burned value credited to each transaction's first input address. */
std::map<std::string, Amount> burn_by_sender(const BurnSeries& series);

/** Mean burned satoshis per calendar day over range, counting empty days as zero. */
double mean_daily_burn(const BurnSeries& series, const DateRange& range);

/** Largest days first; ties by date. */
std::vector<std::pair<Date, Amount>> top_days(const BurnSeries& series, size_t n);

struct CampaignRow {
    std::string message_id;
    std::string text;
    size_t tx_count{0};
    uint32_t first_time{0};
    uint32_t last_time{0};
    Amount burned;
    size_t unique_addresses{0};
    size_t unique_inputs{0};
};

struct CampaignSummary {
    /** Registry order, then fallback-matched ids in sorted order. Empty messages keep a zero row. */
    std::vector<CampaignRow> rows;
    size_t tx_count{0};
    Amount burned;
    size_t unique_addresses{0};
    size_t unique_inputs{0};

    const CampaignRow* row(std::string_view message_id) const;
};

CampaignSummary campaign_summary(const LedgerIndex& index, const MessageRegistry& registry);

enum class TxClass { Burn, Payment, Funding, Donation, External };

std::string_view tx_class_name(TxClass c);

struct Classification {
    TxClass cls{TxClass::External};
    std::optional<Callout> callout;
};

Classification classify_transaction(const ResolvedTransaction& tx, const LabelTable& labels,
                                    const MessageRegistry& registry);

struct Payment {
    TxId txid;
    uint32_t time{0};
    /** Receiving entity. */
    Entity entity{Entity::UNKNOWN};
    std::string sender;
    /** Non-change outputs to entity-labeled addresses. */
    std::vector<std::pair<std::string, Amount>> receivers;
    Amount value;
    /** Every counted output is below the dust threshold. */
    bool dust{false};
};

/** One record per (payment transaction, receiving agency). */
std::vector<Payment> collect_payments(const std::vector<ResolvedTransaction>& txs, const LabelTable& labels,
                                      const MessageRegistry& registry,
                                      uint64_t dust_threshold = DEFAULT_DUST_THRESHOLD);

struct PricedPayment {
    Payment payment;
    UsdCents usd;
    bool outlier{false};
};

struct PaymentRow {
    Entity entity{Entity::UNKNOWN};
    size_t count{0};
    Amount total_sat;
    UsdCents total;
    UsdCents mean;
    UsdCents median;
    UsdCents min;
    UsdCents max;
    size_t outliers{0};
    UsdCents outlier_mean;
    UsdCents outlier_min;
    UsdCents outlier_max;
    size_t dust{0};
};

struct PaymentStats {
    /** GRU, SVR, FSB. */
    std::vector<PaymentRow> rows;
    /** Same order as the input payments. */
    std::vector<PricedPayment> priced;

    const PaymentRow& row(Entity e) const;
};

/** Throws DateNotCovered when a payment day has no price. */
PaymentStats payment_stats(const std::vector<Payment>& payments, const PriceTable& prices);

/** Round half-up of numerator / denominator for non-negative inputs. */
int64_t div_round(int64_t numerator, int64_t denominator);

enum class PeelHeuristic { Largest, Unlabeled };
enum class PeelEnd { MaxHops, NoSuccessor, ReachedLabeled };

std::string_view peel_heuristic_name(PeelHeuristic h);
std::optional<PeelHeuristic> parse_peel_heuristic(std::string_view name);
std::string_view peel_end_name(PeelEnd e);

struct PeelHop {
    TxId txid;
    uint32_t vout{0};
    Amount value;
    std::optional<std::string> address;
};

struct PeelTrace {
    OutPoint start;
    std::vector<PeelHop> hops;
    PeelEnd end{PeelEnd::NoSuccessor};
};

/** Throws UnknownTx when start is not an indexed output. */
PeelTrace trace_peel_chain(const LedgerIndex& index, const OutPoint& start, size_t max_hops,
                           PeelHeuristic heuristic, const LabelTable& labels);

enum class Direction { In, Out };

struct CounterpartyRow {
    uint32_t time{0};
    TxId txid;
    std::string counterparty;
    Entity entity{Entity::UNKNOWN};
    Direction direction{Direction::Out};
    Amount value;
    /** Unset when the day has no price. */
    std::optional<UsdCents> usd;
};

/** Chronological interactions of address with labeled addresses of another entity. */
std::vector<CounterpartyRow> counterparty_report(const LedgerIndex& index, const LabelTable& labels,
                                                 const std::string& address, const PriceTable* prices = nullptr);

struct DonationSummary {
    size_t tx_count{0};
    size_t total_outputs{0};
    size_t donation_outputs{0};
    /** Outputs carrying value, i.e. every output except OP_RETURN ones. */
    size_t value_outputs{0};
    Amount donated;
    UsdCents donated_usd;
    UsdCents output_mean;
    UsdCents output_min;
    std::vector<TxId> txids;
};

DonationSummary donation_report(const std::vector<ResolvedTransaction>& txs, const MessageRegistry& registry,
                                const LabelTable& labels, const PriceTable& prices);

struct GraphNode {
    std::string address;
    std::optional<Entity> entity;
};

struct GraphEdge {
    std::string from;
    std::string to;
    Amount value;
    uint32_t time{0};
    TxId txid;
};

struct PaymentGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
};

PaymentGraph build_payment_graph(const std::vector<Payment>& payments, const LabelTable& labels);
void export_graph_dot(const PaymentGraph& g, std::ostream& out);
void export_graph_json(const PaymentGraph& g, std::ostream& out);

/** `timestamp,txid,usd_value,is_outlier` */
void export_timeline_csv(const PaymentStats& stats, std::ostream& out);
void export_timeline_svg(const PaymentStats& stats, std::ostream& out);
/** `date,burned_sat,burned_btc` */
void export_burn_csv(const BurnSeries& series, std::ostream& out);
void export_burn_svg(const BurnSeries& series, std::ostream& out);

} // namespace burnscope

#endif // BURNSCOPE_ANALYTICS_HPP
