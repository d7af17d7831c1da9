// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/address.hpp>
#include <burnscope/error.hpp>
#include <burnscope/synth.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace burnscope {

using json = nlohmann::ordered_json;

namespace {

constexpr Amount SUBSIDY{50 * COIN};
constexpr Amount CONSOLIDATION_FUNDING{10'000};
constexpr uint32_t BITS_REGTEST = 0x207fffff;
constexpr int64_t FIRST_BLOCK_OFFSET = 8 * 3600;
constexpr size_t FUNDING_BATCH = 200;

// ---------------------------------------------------------------------------
// scenario config

[[noreturn]] void bad_config(const std::string& msg)
{
    fail(Errc::BadConfig, "scenario: " + msg);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) bad_config(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            bad_config("unknown key '" + key + "' in " + where);
        }
    }
}

const json& req(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key)) bad_config("missing '" + std::string(key) + "' in " + where);
    return obj[key];
}

uint64_t get_u64(const json& obj, const char* key, const std::string& where)
{
    const json& v = req(obj, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
        bad_config("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
    }
    return v.get<uint64_t>();
}

uint32_t get_u32(const json& obj, const char* key, const std::string& where)
{
    const uint64_t v = get_u64(obj, key, where);
    if (v > UINT32_MAX) bad_config("'" + std::string(key) + "' in " + where + " is too large");
    return static_cast<uint32_t>(v);
}

Amount get_amount(const json& obj, const char* key, const std::string& where)
{
    const uint64_t v = get_u64(obj, key, where);
    if (v > MAX_MONEY) bad_config("'" + std::string(key) + "' in " + where + " exceeds 21M BTC");
    return Amount(v);
}

std::string get_string(const json& obj, const char* key, const std::string& where)
{
    const json& v = req(obj, key, where);
    if (!v.is_string()) bad_config("'" + std::string(key) + "' in " + where + " must be a string");
    return v.get<std::string>();
}

Date get_date(const json& obj, const char* key, const std::string& where)
{
    try {
        return Date::parse(get_string(obj, key, where));
    } catch (const Error& e) {
        bad_config(std::string(key) + " in " + where + ": " + e.what());
    }
}

Entity get_entity(const json& obj, const char* key, const std::string& where)
{
    const std::string name = get_string(obj, key, where);
    const auto e = parse_entity(name);
    if (!e) bad_config("unknown entity '" + name + "' in " + where);
    return *e;
}

const std::set<std::string>& known_roles()
{
    static const std::set<std::string> roles = {"gru_burner", "gru_payer", "gru_fanout", "gru_receiver",
                                                "svr",        "fsb",       "donation",   "mixer"};
    return roles;
}

RoleRef get_role(const json& obj, const std::string& where)
{
    RoleRef r{get_string(obj, "role", where), get_u32(obj, "index", where)};
    if (!known_roles().count(r.role)) bad_config("unknown role '" + r.role + "' in " + where);
    return r;
}

json role_json(const RoleRef& r)
{
    return json{{"role", r.role}, {"index", r.index}};
}

// ---------------------------------------------------------------------------
// address slots and wallets

struct Slot {
    RoleRef ref;
    Hash160 hash{};
    bool bech32{false};
    std::string encoded;
    Bytes script;
    Bytes pubkey;
    std::optional<Entity> entity;
};

enum class Tag { Coinbase, Deposit, Legacy, Peel, Burn, Noise, Payment, Fanout, Donation, Counterparty, Consolidation };

bool is_callout(Tag t)
{
    return t == Tag::Burn || t == Tag::Donation;
}

struct OutSpec {
    /** Unset for OP_RETURN. */
    std::optional<size_t> slot;
    Amount value;
    Bytes op_return;
    /** Output becomes spendable by the recipient wallet. */
    bool credit{false};
};

struct Event {
    Tag tag{Tag::Deposit};
    Date date;
    std::vector<size_t> senders;
    std::vector<OutSpec> outputs;
    /** Remainder goes here instead of back to senders[0]. */
    std::optional<size_t> continuation;
    bool continuation_credit{false};
    /** Amount each sender must receive from the funding batch for this event. */
    std::vector<std::pair<size_t, Amount>> needs;
    std::string message_id;
    Entity entity{Entity::UNKNOWN};
    bool pinned{false};
};

struct Emitted {
    Transaction tx;
    TxId id;
    Tag tag{Tag::Coinbase};
    Date date;
    uint32_t time{0};
    std::vector<size_t> input_slots;
    /** Per output: slot or unset for OP_RETURN. */
    std::vector<std::optional<size_t>> output_slots;
    std::string message_id;
    Entity entity{Entity::UNKNOWN};
    bool pinned{false};
    /** Followed output for peel hops. */
    uint32_t continuation_vout{0};
};

class Builder
{
public:
    explicit Builder(const ChainScenario& s) : m_s(s)
    {
        for (const NamedAddress& n : s.named) {
            const Base58Check d = [&] {
                try {
                    return base58check_decode(n.address);
                } catch (const Error& e) {
                    bad_config("named address " + n.address + ": " + e.what());
                }
            }();
            if (d.version != 0x00 || d.payload.size() != 20) bad_config("named address must be mainnet P2PKH: " + n.address);
            Hash160 h;
            std::copy(d.payload.begin(), d.payload.end(), h.begin());
            m_named[n.slot] = h;
        }
    }

    size_t slot(const std::string& role, uint32_t index)
    {
        const RoleRef ref{role, index};
        const auto it = m_slot_ids.find(ref);
        if (it != m_slot_ids.end()) return it->second;
        Slot sl;
        sl.ref = ref;
        if (const auto n = m_named.find(ref); n != m_named.end()) {
            sl.hash = n->second;
        } else {
            sl.hash = hash160(to_bytes("burnscope-synth|" + std::to_string(m_s.seed) + "|" + role + "|" +
                                       std::to_string(index)));
        }
        const Hash256 pk = sha256(to_bytes("pub|" + std::to_string(m_s.seed) + "|" + role + "|" + std::to_string(index)));
        sl.pubkey.push_back(0x02);
        sl.pubkey.insert(sl.pubkey.end(), pk.begin(), pk.end());
        sl.bech32 = role == "gru_payer" && index >= m_s.entities.gru_payers - std::min(m_s.entities.gru_bech32, m_s.entities.gru_payers);
        if (sl.bech32) {
            sl.encoded = p2wpkh_address(sl.hash, Network::Regtest);
            sl.script = p2wpkh_script(sl.hash);
        } else {
            sl.encoded = p2pkh_address(sl.hash, Network::Regtest);
            sl.script = p2pkh_script(sl.hash);
        }
        sl.entity = role_entity(role);
        m_slots.push_back(std::move(sl));
        m_wallets.emplace_back();
        m_slot_ids.emplace(ref, m_slots.size() - 1);
        return m_slots.size() - 1;
    }

    const Slot& at(size_t id) const { return m_slots[id]; }
    const std::vector<Slot>& slots() const { return m_slots; }
    const std::vector<Emitted>& emitted() const { return m_emitted; }
    std::vector<Emitted>& emitted() { return m_emitted; }

    void credit(size_t slot_id, OutPoint op, Amount v) { m_wallets[slot_id].emplace_back(op, v); }

    Emitted emit(const Event& ev)
    {
        Transaction tx;
        Emitted out;
        Amount in_total;
        for (size_t s : ev.senders) {
            for (const auto& [op, v] : m_wallets[s]) {
                TxInput in;
                in.previous = op;
                const Bytes sig = placeholder_sig();
                if (m_slots[s].bech32) {
                    in.witness = {sig, m_slots[s].pubkey};
                } else {
                    push_data(in.script_sig, sig);
                    push_data(in.script_sig, m_slots[s].pubkey);
                }
                tx.inputs.push_back(std::move(in));
                out.input_slots.push_back(s);
                in_total += v;
            }
            m_wallets[s].clear();
        }
        if (tx.inputs.empty()) fail(Errc::InfeasibleScenario, "wallet " + m_slots[ev.senders.at(0)].encoded + " has nothing to spend");

        Amount fixed_total;
        std::vector<std::pair<size_t, bool>> credits;
        for (const OutSpec& o : ev.outputs) {
            TxOutput txo;
            txo.value = o.value;
            if (o.slot) {
                txo.script_pubkey = m_slots[*o.slot].script;
            } else {
                txo.script_pubkey = op_return_script(o.op_return);
            }
            fixed_total += o.value;
            tx.outputs.push_back(std::move(txo));
            out.output_slots.push_back(o.slot);
            credits.emplace_back(o.slot.value_or(0), o.slot && o.credit);
        }
        const Amount spend = fixed_total + m_s.fee;
        if (in_total < spend) {
            fail(Errc::InfeasibleScenario, "wallet " + m_slots[ev.senders[0]].encoded + " is short of funds");
        }
        const Amount remainder = in_total - spend;
        if (ev.continuation) {
            if (remainder == Amount(0)) fail(Errc::InfeasibleScenario, "peel chain exhausted its input");
            out.continuation_vout = static_cast<uint32_t>(tx.outputs.size());
            tx.outputs.push_back(TxOutput{remainder, m_slots[*ev.continuation].script});
            out.output_slots.push_back(*ev.continuation);
            credits.emplace_back(*ev.continuation, ev.continuation_credit);
        } else if (remainder > Amount(0)) {
            tx.outputs.push_back(TxOutput{remainder, m_slots[ev.senders[0]].script});
            out.output_slots.push_back(ev.senders[0]);
            credits.emplace_back(ev.senders[0], true);
        }
        if (tx.outputs.empty()) fail(Errc::InfeasibleScenario, "transaction without outputs");

        out.id = txid(tx);
        for (uint32_t v = 0; v < credits.size(); ++v) {
            if (credits[v].second) credit(credits[v].first, OutPoint{out.id, v}, tx.outputs[v].value);
        }
        out.tx = std::move(tx);
        out.tag = ev.tag;
        out.date = ev.date;
        out.message_id = ev.message_id;
        out.entity = ev.entity;
        out.pinned = ev.pinned;
        m_emitted.push_back(out);
        return out;
    }

private:
    static std::optional<Entity> role_entity(const std::string& role)
    {
        if (role.rfind("gru_", 0) == 0) return Entity::GRU;
        if (role == "svr") return Entity::SVR;
        if (role == "fsb" || role == "fsb_extra") return Entity::FSB;
        if (role == "donation") return Entity::DONATION;
        if (role == "mixer") return Entity::MIXER;
        if (role == "ransomware") return Entity::RANSOMWARE;
        if (role == "exchange") return Entity::EXCHANGE;
        if (role == "gambling") return Entity::GAMBLING;
        return std::nullopt;
    }

    Bytes placeholder_sig()
    {
        const Hash256 r = sha256(to_bytes("r|" + std::to_string(m_s.seed) + "|" + std::to_string(m_sig_counter)));
        const Hash256 s = sha256(to_bytes("s|" + std::to_string(m_s.seed) + "|" + std::to_string(m_sig_counter)));
        ++m_sig_counter;
        Bytes sig = {0x30, 0x44, 0x02, 0x20};
        sig.insert(sig.end(), r.begin(), r.end());
        sig.insert(sig.end(), {0x02, 0x20});
        sig.insert(sig.end(), s.begin(), s.end());
        sig[4] &= 0x7f;
        sig[38] &= 0x7f;
        sig.push_back(0x01);
        return sig;
    }

    const ChainScenario& m_s;
    std::map<RoleRef, Hash160> m_named;
    std::map<RoleRef, size_t> m_slot_ids;
    std::vector<Slot> m_slots;
    std::vector<std::vector<std::pair<OutPoint, Amount>>> m_wallets;
    std::vector<Emitted> m_emitted;
    uint64_t m_sig_counter{0};
};

std::vector<Amount> even_split(Amount total, uint32_t count, const std::string& what)
{
    if (count == 0) return {};
    if (total.sat() < count) {
        fail(Errc::InfeasibleScenario, what + ": " + std::to_string(total.sat()) + " sat cannot cover " +
                                           std::to_string(count) + " transactions");
    }
    const uint64_t per = total.sat() / count;
    std::vector<Amount> out(count, Amount(per));
    out.back() = Amount(per + total.sat() % count);
    return out;
}

Transaction coinbase_tx(uint32_t height, Amount value, const Bytes& script)
{
    Transaction tx;
    TxInput in;
    in.previous = OutPoint::coinbase();
    Bytes h;
    for (uint32_t v = height; v > 0; v >>= 8) h.push_back(static_cast<uint8_t>(v & 0xff));
    if (h.empty() || (h.back() & 0x80)) h.push_back(0);
    push_data(in.script_sig, h);
    push_data(in.script_sig, to_bytes("burnscope"));
    tx.inputs.push_back(std::move(in));
    tx.outputs.push_back(TxOutput{value, script});
    return tx;
}

// Plan-level statistics kept separate from the analytics code paths.
int64_t half_up(int64_t num, int64_t den)
{
    return den > 0 ? (2 * num + den) / (2 * den) : 0;
}

double sorted_quantile(const std::vector<int64_t>& sorted, double q)
{
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    return static_cast<double>(sorted[lo]) + (static_cast<double>(sorted[hi] - sorted[lo])) * (pos - static_cast<double>(lo));
}

PaymentRow truth_payment_row(Entity e, const std::vector<std::pair<int64_t, Amount>>& values)
{
    PaymentRow row;
    row.entity = e;
    row.count = values.size();
    if (values.empty()) return row;
    std::vector<int64_t> v;
    int64_t total = 0;
    for (const auto& [c, sat] : values) {
        v.push_back(c);
        total += c;
        row.total_sat += sat;
    }
    std::sort(v.begin(), v.end());
    row.total = UsdCents(total);
    row.mean = UsdCents(half_up(total, static_cast<int64_t>(v.size())));
    row.median = UsdCents(static_cast<int64_t>(std::floor(sorted_quantile(v, 0.5) + 0.5)));
    row.min = UsdCents(v.front());
    row.max = UsdCents(v.back());
    const double q1 = sorted_quantile(v, 0.25);
    const double q3 = sorted_quantile(v, 0.75);
    const double lo = q1 - 1.5 * (q3 - q1);
    const double hi = q3 + 1.5 * (q3 - q1);
    std::vector<int64_t> outl;
    for (int64_t c : v) {
        if (static_cast<double>(c) < lo || static_cast<double>(c) > hi) outl.push_back(c);
    }
    row.outliers = outl.size();
    if (!outl.empty()) {
        int64_t s = 0;
        for (int64_t c : outl) s += c;
        row.outlier_mean = UsdCents(half_up(s, static_cast<int64_t>(outl.size())));
        row.outlier_min = UsdCents(outl.front());
        row.outlier_max = UsdCents(outl.back());
    }
    return row;
}

ClusterRow truth_cluster_row(Entity e, const std::vector<std::pair<size_t, size_t>>& size_and_txs)
{
    ClusterRow row;
    row.entity = e;
    row.clusters = size_and_txs.size();
    if (size_and_txs.empty()) return row;
    const double n = static_cast<double>(size_and_txs.size());
    double s1 = 0;
    double t1 = 0;
    for (const auto& [sz, tx] : size_and_txs) {
        row.addresses += sz;
        s1 += static_cast<double>(sz);
        t1 += static_cast<double>(tx);
    }
    row.size_mean = s1 / n;
    row.tx_mean = t1 / n;
    double s2 = 0;
    double t2 = 0;
    for (const auto& [sz, tx] : size_and_txs) {
        s2 += (static_cast<double>(sz) - row.size_mean) * (static_cast<double>(sz) - row.size_mean);
        t2 += (static_cast<double>(tx) - row.tx_mean) * (static_cast<double>(tx) - row.tx_mean);
    }
    row.size_std = std::sqrt(s2 / n);
    row.tx_std = std::sqrt(t2 / n);
    return row;
}

json usd_json(UsdCents c)
{
    return c.str();
}

UsdCents usd_from_json(const json& j)
{
    return parse_usd(j.get<std::string>());
}

json payment_row_json(const PaymentRow& r)
{
    return json{{"entity", entity_name(r.entity)},
                {"count", r.count},
                {"total_sat", r.total_sat.sat()},
                {"total_usd", usd_json(r.total)},
                {"mean_usd", usd_json(r.mean)},
                {"median_usd", usd_json(r.median)},
                {"min_usd", usd_json(r.min)},
                {"max_usd", usd_json(r.max)},
                {"outlier_count", r.outliers},
                {"outlier_mean_usd", usd_json(r.outlier_mean)},
                {"outlier_min_usd", usd_json(r.outlier_min)},
                {"outlier_max_usd", usd_json(r.outlier_max)}};
}

json cluster_row_json(const ClusterRow& r)
{
    return json{{"entity", entity_name(r.entity)},  {"addresses", r.addresses}, {"clusters", r.clusters},
                {"size_mean", r.size_mean},          {"size_std", r.size_std},   {"tx_mean", r.tx_mean},
                {"tx_std", r.tx_std}};
}

Entity entity_from(const json& j)
{
    const auto e = parse_entity(j.get<std::string>());
    if (!e) fail(Errc::BadConfig, "ground truth: unknown entity " + j.get<std::string>());
    return *e;
}

} // namespace

// ---------------------------------------------------------------------------
// config I/O

ChainScenario scenario_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad_config(std::string("not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"schema_version", "seed", "genesis_date", "funding_date", "cospend_date", "fee_sat", "txs_per_block",
                "burn_receiver_sat", "entities", "named_addresses", "burn_schedule", "noise_burns", "payment_schedule",
                "funding", "donation", "counterparty", "legacy_activity", "prices", "registry"},
               "scenario");
    ChainScenario s;
    try {
        if (j.contains("schema_version") && get_u64(j, "schema_version", "scenario") != SCHEMA_VERSION) {
            bad_config("unsupported schema_version");
        }
        s.seed = get_u64(j, "seed", "scenario");
        if (j.contains("genesis_date")) s.genesis_date = get_date(j, "genesis_date", "scenario");
        if (j.contains("funding_date")) s.funding_date = get_date(j, "funding_date", "scenario");
        if (j.contains("cospend_date")) s.cospend_date = get_date(j, "cospend_date", "scenario");
        if (j.contains("fee_sat")) s.fee = get_amount(j, "fee_sat", "scenario");
        if (j.contains("txs_per_block")) s.txs_per_block = get_u32(j, "txs_per_block", "scenario");
        if (s.txs_per_block == 0) bad_config("txs_per_block must be positive");
        if (j.contains("burn_receiver_sat")) s.burn_receiver_output = get_amount(j, "burn_receiver_sat", "scenario");
        if (j.contains("registry")) s.registry = MessageRegistry::from_json(j["registry"].dump());

        const json& ent = req(j, "entities", "scenario");
        check_keys(ent, {"gru_burners", "gru_payers", "gru_receivers", "gru_bech32", "svr", "fsb", "fsb_cospend_extras"},
                   "entities");
        EntityCounts& c = s.entities;
        c.gru_burners = get_u32(ent, "gru_burners", "entities");
        if (ent.contains("gru_payers")) c.gru_payers = get_u32(ent, "gru_payers", "entities");
        if (ent.contains("gru_receivers")) c.gru_receivers = get_u32(ent, "gru_receivers", "entities");
        if (ent.contains("gru_bech32")) c.gru_bech32 = get_u32(ent, "gru_bech32", "entities");
        if (ent.contains("svr")) c.svr = get_u32(ent, "svr", "entities");
        if (ent.contains("fsb")) c.fsb = get_u32(ent, "fsb", "entities");
        if (ent.contains("fsb_cospend_extras")) {
            for (const json& x : ent["fsb_cospend_extras"]) {
                if (!x.is_number_unsigned()) bad_config("fsb_cospend_extras must hold non-negative integers");
                c.fsb_cospend_extras.push_back(x.get<uint32_t>());
            }
            if (c.fsb_cospend_extras.size() != c.fsb) bad_config("fsb_cospend_extras needs one entry per FSB address");
        }
        if (c.gru_bech32 > c.gru_payers) bad_config("gru_bech32 exceeds gru_payers");

        if (j.contains("named_addresses")) {
            for (const json& n : j["named_addresses"]) {
                check_keys(n, {"role", "index", "address"}, "named_addresses");
                s.named.push_back(NamedAddress{get_role(n, "named_addresses"), get_string(n, "address", "named_addresses")});
            }
        }

        if (!j.contains("burn_schedule")) bad_config("missing burn_schedule");
        const json& bs = j["burn_schedule"];
        if (!bs.is_array() || bs.empty()) bad_config("burn_schedule must be a non-empty array");
        for (const json& b : bs) {
            check_keys(b, {"date", "message", "tx_count", "total_sat", "sender"}, "burn_schedule");
            BurnEntry e;
            e.date = get_date(b, "date", "burn_schedule");
            e.message_id = get_string(b, "message", "burn_schedule");
            if (!s.registry.find_id(e.message_id)) bad_config("unknown message '" + e.message_id + "'");
            e.tx_count = get_u32(b, "tx_count", "burn_schedule");
            e.total = get_amount(b, "total_sat", "burn_schedule");
            if (b.contains("sender")) e.sender = get_u32(b, "sender", "burn_schedule");
            s.burns.push_back(std::move(e));
        }
        if (j.contains("noise_burns")) {
            for (const json& b : j["noise_burns"]) {
                check_keys(b, {"date", "tx_count", "total_sat", "payload"}, "noise_burns");
                s.noise.push_back(NoiseBurn{get_date(b, "date", "noise_burns"), get_u32(b, "tx_count", "noise_burns"),
                                            get_amount(b, "total_sat", "noise_burns"),
                                            get_string(b, "payload", "noise_burns")});
            }
        }
        if (j.contains("payment_schedule")) {
            for (const json& p : j["payment_schedule"]) {
                check_keys(p, {"date", "entity", "tx_count", "per_output_sat", "fan_out", "dedicated_sender", "receiver"},
                           "payment_schedule");
                PaymentEntry e;
                e.date = get_date(p, "date", "payment_schedule");
                e.entity = get_entity(p, "entity", "payment_schedule");
                if (!is_agency(e.entity)) bad_config("payments must go to GRU, SVR or FSB");
                e.tx_count = get_u32(p, "tx_count", "payment_schedule");
                e.per_output = get_amount(p, "per_output_sat", "payment_schedule");
                if (p.contains("fan_out")) e.fan_out = get_u32(p, "fan_out", "payment_schedule");
                if (e.fan_out == 0) bad_config("fan_out must be positive");
                if (p.contains("dedicated_sender")) e.dedicated_sender = p["dedicated_sender"].get<bool>();
                if (p.contains("receiver")) e.receiver = get_u32(p, "receiver", "payment_schedule");
                s.payments.push_back(e);
            }
        }
        if (j.contains("funding")) {
            const json& f = j["funding"];
            check_keys(f, {"date", "amount_sat", "peel_hops", "peel_sat", "final_recipient"}, "funding");
            FundingSpec fs;
            fs.date = get_date(f, "date", "funding");
            fs.amount = get_amount(f, "amount_sat", "funding");
            fs.peel_hops = get_u32(f, "peel_hops", "funding");
            fs.peel_amount = get_amount(f, "peel_sat", "funding");
            const json& fr = req(f, "final_recipient", "funding");
            check_keys(fr, {"role", "index"}, "funding.final_recipient");
            fs.final_recipient = get_role(fr, "funding.final_recipient");
            s.funding = fs;
        }
        if (j.contains("donation")) {
            const json& d = j["donation"];
            check_keys(d, {"date", "message", "tx_count", "total_outputs", "donation_output_sat", "dust"}, "donation");
            DonationSpec ds;
            ds.date = get_date(d, "date", "donation");
            ds.message_id = get_string(d, "message", "donation");
            if (!s.registry.find_id(ds.message_id)) bad_config("unknown message '" + ds.message_id + "'");
            ds.tx_count = get_u32(d, "tx_count", "donation");
            ds.total_outputs = get_u32(d, "total_outputs", "donation");
            ds.donation_output = get_amount(d, "donation_output_sat", "donation");
            uint64_t dust = 0;
            if (d.contains("dust")) {
                for (const json& g : d["dust"]) {
                    check_keys(g, {"count", "sat"}, "donation.dust");
                    ds.dust.push_back(DustGroup{get_u32(g, "count", "donation.dust"), get_amount(g, "sat", "donation.dust")});
                    dust += ds.dust.back().count;
                }
            }
            if (2ull * ds.tx_count + dust != ds.total_outputs) {
                bad_config("donation total_outputs must equal 2 x tx_count plus the dust outputs");
            }
            s.donation = ds;
        }
        if (j.contains("counterparty")) {
            const json& cp = j["counterparty"];
            check_keys(cp, {"subject", "events"}, "counterparty");
            const json& subj = req(cp, "subject", "counterparty");
            check_keys(subj, {"role", "index"}, "counterparty.subject");
            s.counterparty_subject = get_role(subj, "counterparty.subject");
            for (const json& e : req(cp, "events", "counterparty")) {
                check_keys(e, {"date", "entity", "sat"}, "counterparty.events");
                s.counterparty.push_back(CounterpartyEvent{get_date(e, "date", "counterparty.events"),
                                                           get_entity(e, "entity", "counterparty.events"),
                                                           get_amount(e, "sat", "counterparty.events")});
            }
        }
        if (j.contains("legacy_activity")) {
            for (const json& l : j["legacy_activity"]) {
                check_keys(l, {"date", "role", "index", "sat"}, "legacy_activity");
                s.legacy.push_back(LegacySpend{get_date(l, "date", "legacy_activity"), get_role(l, "legacy_activity"),
                                               get_amount(l, "sat", "legacy_activity")});
            }
        }
        if (j.contains("prices")) {
            const json& p = j["prices"];
            if (!p.is_object()) bad_config("prices must map dates to decimal strings");
            for (const auto& [date, price] : p.items()) {
                if (!price.is_string()) bad_config("price for " + date + " must be a string");
                s.prices.set(Date::parse(date), parse_price(price.get<std::string>()));
            }
        }
    } catch (const Error& e) {
        if (e.code() == Errc::BadConfig) throw;
        bad_config(e.what());
    } catch (const json::exception& e) {
        bad_config(e.what());
    }

    for (const PaymentEntry& p : s.payments) {
        if (!s.prices.covers(p.date)) bad_config("no price for payment date " + p.date.str());
    }
    if (s.donation && !s.prices.covers(s.donation->date)) bad_config("no price for donation date");
    return s;
}

ChainScenario scenario_from_file(const std::filesystem::path& path)
{
    return scenario_from_json(read_text_file(path));
}

std::string scenario_to_json(const ChainScenario& s)
{
    json j;
    j["schema_version"] = SCHEMA_VERSION;
    j["seed"] = s.seed;
    j["genesis_date"] = s.genesis_date.str();
    j["funding_date"] = s.funding_date.str();
    j["cospend_date"] = s.cospend_date.str();
    j["fee_sat"] = s.fee.sat();
    j["txs_per_block"] = s.txs_per_block;
    j["burn_receiver_sat"] = s.burn_receiver_output.sat();
    const EntityCounts& c = s.entities;
    j["entities"] = json{{"gru_burners", c.gru_burners}, {"gru_payers", c.gru_payers},
                         {"gru_receivers", c.gru_receivers}, {"gru_bech32", c.gru_bech32},
                         {"svr", c.svr}, {"fsb", c.fsb}, {"fsb_cospend_extras", c.fsb_cospend_extras}};
    json named = json::array();
    for (const NamedAddress& n : s.named) {
        json o = role_json(n.slot);
        o["address"] = n.address;
        named.push_back(std::move(o));
    }
    j["named_addresses"] = std::move(named);
    json burns = json::array();
    for (const BurnEntry& b : s.burns) {
        json o{{"date", b.date.str()}, {"message", b.message_id}, {"tx_count", b.tx_count}, {"total_sat", b.total.sat()}};
        if (b.sender) o["sender"] = *b.sender;
        burns.push_back(std::move(o));
    }
    j["burn_schedule"] = std::move(burns);
    json noise = json::array();
    for (const NoiseBurn& n : s.noise) {
        noise.push_back(json{{"date", n.date.str()}, {"tx_count", n.tx_count}, {"total_sat", n.total.sat()},
                             {"payload", n.payload}});
    }
    j["noise_burns"] = std::move(noise);
    json pays = json::array();
    for (const PaymentEntry& p : s.payments) {
        json o{{"date", p.date.str()},         {"entity", entity_name(p.entity)}, {"tx_count", p.tx_count},
               {"per_output_sat", p.per_output.sat()}, {"fan_out", p.fan_out}, {"dedicated_sender", p.dedicated_sender}};
        if (p.receiver) o["receiver"] = *p.receiver;
        pays.push_back(std::move(o));
    }
    j["payment_schedule"] = std::move(pays);
    if (s.funding) {
        const FundingSpec& f = *s.funding;
        j["funding"] = json{{"date", f.date.str()}, {"amount_sat", f.amount.sat()}, {"peel_hops", f.peel_hops},
                            {"peel_sat", f.peel_amount.sat()}, {"final_recipient", role_json(f.final_recipient)}};
    }
    if (s.donation) {
        const DonationSpec& d = *s.donation;
        json dust = json::array();
        for (const DustGroup& g : d.dust) dust.push_back(json{{"count", g.count}, {"sat", g.value.sat()}});
        j["donation"] = json{{"date", d.date.str()},
                             {"message", d.message_id},
                             {"tx_count", d.tx_count},
                             {"total_outputs", d.total_outputs},
                             {"donation_output_sat", d.donation_output.sat()},
                             {"dust", std::move(dust)}};
    }
    if (s.counterparty_subject) {
        json events = json::array();
        for (const CounterpartyEvent& e : s.counterparty) {
            events.push_back(json{{"date", e.date.str()}, {"entity", entity_name(e.entity)}, {"sat", e.value.sat()}});
        }
        j["counterparty"] = json{{"subject", role_json(*s.counterparty_subject)}, {"events", std::move(events)}};
    }
    json legacy = json::array();
    for (const LegacySpend& l : s.legacy) {
        json o = role_json(l.who);
        o["date"] = l.date.str();
        o["sat"] = l.value.sat();
        legacy.push_back(std::move(o));
    }
    j["legacy_activity"] = std::move(legacy);
    json prices = json::object();
    for (const auto& [d, p] : s.prices.entries()) prices[d.str()] = format_price(p);
    j["prices"] = std::move(prices);
    j["registry"] = json::parse(s.registry.to_json());
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// ground truth I/O

std::string GroundTruth::to_json() const
{
    json j;
    j["schema_version"] = SCHEMA_VERSION;
    j["seed"] = seed;
    j["blocks"] = blocks;
    j["transactions"] = transactions;
    json daily = json::object();
    for (const auto& [d, v] : daily_burns) daily[d.str()] = v.sat();
    j["daily_burns_sat"] = std::move(daily);
    json by_date = json::object();
    for (const auto& [d, n] : campaign_txs_by_date) by_date[d.str()] = n;
    j["campaign_txs_by_date"] = std::move(by_date);
    json rows = json::array();
    for (const CampaignTruth& r : campaign) {
        rows.push_back(json{{"message_id", r.message_id},
                            {"tx_count", r.tx_count},
                            {"burned_sat", r.burned.sat()},
                            {"unique_inputs", r.unique_inputs},
                            {"unique_addresses", r.unique_addresses},
                            {"first_timestamp", r.first_time},
                            {"last_timestamp", r.last_time}});
    }
    j["campaign"] = std::move(rows);
    j["campaign_burn_txs"] = campaign_burn_txs;
    j["campaign_burned_sat"] = campaign_burned.sat();
    j["campaign_unique_inputs"] = campaign_unique_inputs;
    json pinned = json::object();
    for (const auto& [a, v] : pinned_sender_burns) pinned[a] = v.sat();
    j["pinned_sender_burns_sat"] = std::move(pinned);
    if (donation) {
        j["donation"] = json{{"tx_count", donation->tx_count},
                             {"total_outputs", donation->total_outputs},
                             {"donation_outputs", donation->donation_outputs},
                             {"value_outputs", donation->value_outputs},
                             {"donated_sat", donation->donated.sat()},
                             {"donated_usd", usd_json(donation->donated_usd)},
                             {"output_mean_usd", usd_json(donation->output_mean)},
                             {"output_min_usd", usd_json(donation->output_min)}};
    }
    json pay = json::array();
    for (const PaymentRow& r : payments) pay.push_back(payment_row_json(r));
    j["payments"] = std::move(pay);
    json cl = json::array();
    for (const ClusterRow& r : clusters) cl.push_back(cluster_row_json(r));
    j["clusters"] = std::move(cl);
    json labs = json::object();
    for (const auto& [a, e] : labels) labs[a] = entity_name(e);
    j["labels"] = std::move(labs);
    if (trace) {
        json hops = json::array();
        for (const PeelHop& h : trace->hops) {
            hops.push_back(json{{"txid", h.txid.display()},
                                {"vout", h.vout},
                                {"value_sat", h.value.sat()},
                                {"address", h.address.value_or("")}});
        }
        j["trace"] = json{{"start", trace->start.str()}, {"hops", std::move(hops)}, {"end", peel_end_name(trace->end)}};
    }
    if (counterparty_address) {
        json cp = json::array();
        for (const CounterpartyRow& r : counterparty) {
            json o{{"timestamp", r.time},
                   {"txid", r.txid.display()},
                   {"counterparty", r.counterparty},
                   {"entity", entity_name(r.entity)},
                   {"direction", r.direction == Direction::Out ? "out" : "in"},
                   {"value_sat", r.value.sat()}};
            o["usd"] = r.usd ? json(r.usd->str()) : json(nullptr);
            cp.push_back(std::move(o));
        }
        j["counterparty"] = json{{"address", *counterparty_address}, {"rows", std::move(cp)}};
    }
    if (fanout) {
        j["fanout"] = json{{"txid", fanout->txid.display()},
                           {"date", fanout->date.str()},
                           {"inputs", fanout->inputs},
                           {"outputs", fanout->outputs},
                           {"per_output_sat", fanout->per_output.sat()},
                           {"total_sat", fanout->total.sat()},
                           {"usd_total", usd_json(fanout->usd_total)}};
    }
    return j.dump(2) + "\n";
}

GroundTruth GroundTruth::from_json(std::string_view text)
{
    GroundTruth gt;
    try {
        const json j = json::parse(text);
        if (j.at("schema_version").get<int>() != SCHEMA_VERSION) fail(Errc::BadConfig, "ground truth schema mismatch");
        gt.seed = j.at("seed").get<uint64_t>();
        gt.blocks = j.at("blocks").get<size_t>();
        gt.transactions = j.at("transactions").get<size_t>();
        for (const auto& [d, v] : j.at("daily_burns_sat").items()) gt.daily_burns[Date::parse(d)] = Amount(v.get<uint64_t>());
        for (const auto& [d, v] : j.at("campaign_txs_by_date").items()) gt.campaign_txs_by_date[Date::parse(d)] = v.get<size_t>();
        for (const json& r : j.at("campaign")) {
            gt.campaign.push_back(CampaignTruth{r.at("message_id").get<std::string>(), r.at("tx_count").get<size_t>(),
                                                Amount(r.at("burned_sat").get<uint64_t>()),
                                                r.at("unique_inputs").get<size_t>(),
                                                r.at("unique_addresses").get<size_t>(),
                                                r.at("first_timestamp").get<uint32_t>(),
                                                r.at("last_timestamp").get<uint32_t>()});
        }
        gt.campaign_burn_txs = j.at("campaign_burn_txs").get<size_t>();
        gt.campaign_burned = Amount(j.at("campaign_burned_sat").get<uint64_t>());
        gt.campaign_unique_inputs = j.at("campaign_unique_inputs").get<size_t>();
        for (const auto& [a, v] : j.at("pinned_sender_burns_sat").items()) gt.pinned_sender_burns[a] = Amount(v.get<uint64_t>());
        if (j.contains("donation")) {
            const json& d = j["donation"];
            DonationSummary ds;
            ds.tx_count = d.at("tx_count").get<size_t>();
            ds.total_outputs = d.at("total_outputs").get<size_t>();
            ds.donation_outputs = d.at("donation_outputs").get<size_t>();
            ds.value_outputs = d.at("value_outputs").get<size_t>();
            ds.donated = Amount(d.at("donated_sat").get<uint64_t>());
            ds.donated_usd = usd_from_json(d.at("donated_usd"));
            ds.output_mean = usd_from_json(d.at("output_mean_usd"));
            ds.output_min = usd_from_json(d.at("output_min_usd"));
            gt.donation = ds;
        }
        for (const json& r : j.at("payments")) {
            PaymentRow row;
            row.entity = entity_from(r.at("entity"));
            row.count = r.at("count").get<size_t>();
            row.total_sat = Amount(r.at("total_sat").get<uint64_t>());
            row.total = usd_from_json(r.at("total_usd"));
            row.mean = usd_from_json(r.at("mean_usd"));
            row.median = usd_from_json(r.at("median_usd"));
            row.min = usd_from_json(r.at("min_usd"));
            row.max = usd_from_json(r.at("max_usd"));
            row.outliers = r.at("outlier_count").get<size_t>();
            row.outlier_mean = usd_from_json(r.at("outlier_mean_usd"));
            row.outlier_min = usd_from_json(r.at("outlier_min_usd"));
            row.outlier_max = usd_from_json(r.at("outlier_max_usd"));
            gt.payments.push_back(row);
        }
        for (const json& r : j.at("clusters")) {
            gt.clusters.push_back(ClusterRow{entity_from(r.at("entity")), r.at("addresses").get<size_t>(),
                                             r.at("clusters").get<size_t>(), r.at("size_mean").get<double>(),
                                             r.at("size_std").get<double>(), r.at("tx_mean").get<double>(),
                                             r.at("tx_std").get<double>()});
        }
        for (const auto& [a, e] : j.at("labels").items()) gt.labels[a] = entity_from(e);
        if (j.contains("trace")) {
            const json& t = j["trace"];
            PeelTrace tr;
            tr.start = OutPoint::parse(t.at("start").get<std::string>());
            for (const json& h : t.at("hops")) {
                const std::string addr = h.at("address").get<std::string>();
                tr.hops.push_back(PeelHop{TxId::from_display(h.at("txid").get<std::string>()), h.at("vout").get<uint32_t>(),
                                          Amount(h.at("value_sat").get<uint64_t>()),
                                          addr.empty() ? std::nullopt : std::optional<std::string>(addr)});
            }
            const std::string end = t.at("end").get<std::string>();
            if (end == "max_hops") {
                tr.end = PeelEnd::MaxHops;
            } else if (end == "reached_labeled") {
                tr.end = PeelEnd::ReachedLabeled;
            } else {
                tr.end = PeelEnd::NoSuccessor;
            }
            gt.trace = tr;
        }
        if (j.contains("counterparty")) {
            const json& cp = j["counterparty"];
            gt.counterparty_address = cp.at("address").get<std::string>();
            for (const json& r : cp.at("rows")) {
                CounterpartyRow row;
                row.time = r.at("timestamp").get<uint32_t>();
                row.txid = TxId::from_display(r.at("txid").get<std::string>());
                row.counterparty = r.at("counterparty").get<std::string>();
                row.entity = entity_from(r.at("entity"));
                row.direction = r.at("direction").get<std::string>() == "out" ? Direction::Out : Direction::In;
                row.value = Amount(r.at("value_sat").get<uint64_t>());
                if (!r.at("usd").is_null()) row.usd = usd_from_json(r["usd"]);
                gt.counterparty.push_back(row);
            }
        }
        if (j.contains("fanout")) {
            const json& f = j["fanout"];
            gt.fanout = FanoutTruth{TxId::from_display(f.at("txid").get<std::string>()),
                                    Date::parse(f.at("date").get<std::string>()),
                                    f.at("inputs").get<size_t>(),
                                    f.at("outputs").get<size_t>(),
                                    Amount(f.at("per_output_sat").get<uint64_t>()),
                                    Amount(f.at("total_sat").get<uint64_t>()),
                                    usd_from_json(f.at("usd_total"))};
        }
    } catch (const json::exception& e) {
        fail(Errc::BadConfig, std::string("ground truth: ") + e.what());
    }
    return gt;
}

// ---------------------------------------------------------------------------
// generation

SynthOutput build_scenario(const ChainScenario& s)
{
    Builder b(s);
    const EntityCounts& c = s.entities;
    const size_t bank = b.slot("bank", 0);
    const size_t miner = b.slot("miner", 0);

    std::vector<size_t> burners;
    for (uint32_t i = 0; i < c.gru_burners; ++i) burners.push_back(b.slot("gru_burner", i));
    std::vector<size_t> payers;
    for (uint32_t i = 0; i < c.gru_payers; ++i) payers.push_back(b.slot("gru_payer", i));
    std::vector<size_t> receivers;
    for (uint32_t i = 0; i < c.gru_receivers; ++i) receivers.push_back(b.slot("gru_receiver", i));
    std::vector<size_t> svr;
    for (uint32_t i = 0; i < c.svr; ++i) svr.push_back(b.slot("svr", i));
    std::vector<size_t> fsb;
    for (uint32_t i = 0; i < c.fsb; ++i) fsb.push_back(b.slot("fsb", i));
    const bool needs_fanout =
        std::any_of(s.payments.begin(), s.payments.end(), [](const PaymentEntry& p) { return p.dedicated_sender; });
    const std::optional<size_t> fanout = needs_fanout ? std::optional<size_t>(b.slot("gru_fanout", 0)) : std::nullopt;

    // receivers of GRU-to-GRU callouts: every non-burning GRU wallet
    std::vector<size_t> gru_pool = receivers;
    gru_pool.insert(gru_pool.end(), payers.begin(), payers.end());
    if (fanout) gru_pool.push_back(*fanout);

    const auto role_slot = [&](const RoleRef& r) -> size_t {
        const auto bound = [&](uint32_t n) {
            if (r.index >= n) bad_config("slot " + r.role + "[" + std::to_string(r.index) + "] is out of range");
        };
        if (r.role == "gru_burner") bound(c.gru_burners);
        if (r.role == "gru_payer") bound(c.gru_payers);
        if (r.role == "gru_receiver") bound(c.gru_receivers);
        if (r.role == "svr") bound(c.svr);
        if (r.role == "fsb") bound(c.fsb);
        if (r.role == "gru_fanout") bound(fanout ? 1 : 0);
        return b.slot(r.role, r.index);
    };
    const auto entity_slot = [&](Entity e) -> size_t {
        std::string role(entity_name(e));
        std::transform(role.begin(), role.end(), role.begin(), [](char ch) { return static_cast<char>(std::tolower(ch)); });
        return b.slot(role, 0);
    };
    for (const NamedAddress& n : s.named) role_slot(n.slot);

    std::vector<Event> events;
    // one round-robin cursor per receiver pool
    std::map<const std::vector<size_t>*, size_t> cursor;
    const auto next_receiver = [&](Entity e, std::optional<uint32_t> pinned, bool payment) -> size_t {
        const std::vector<size_t>* pool = nullptr;
        if (e == Entity::SVR) pool = &svr;
        if (e == Entity::FSB) pool = &fsb;
        if (e == Entity::GRU) pool = payment ? &receivers : &gru_pool;
        if (!pool) return entity_slot(e);
        if (pool->empty()) fail(Errc::InfeasibleScenario, "no " + std::string(entity_name(e)) + " addresses to receive");
        if (pinned) {
            if (*pinned >= pool->size()) bad_config("receiver index out of range");
            return (*pool)[*pinned];
        }
        return (*pool)[cursor[pool]++ % pool->size()];
    };

    // legacy deposits and single spends ahead of the campaign
    uint32_t infra = 0;
    for (const LegacySpend& l : s.legacy) {
        const size_t who = role_slot(l.who);
        Event dep;
        dep.tag = Tag::Deposit;
        dep.date = l.date;
        dep.senders = {bank};
        dep.outputs = {OutSpec{who, l.value + s.fee, {}, true}};
        events.push_back(dep);
        Event sp;
        sp.tag = Tag::Legacy;
        sp.date = l.date;
        sp.senders = {who};
        sp.outputs = {OutSpec{b.slot("infra", infra++), l.value, {}, false}};
        events.push_back(sp);
    }

    // mixer deposit and peel chain
    if (s.funding) {
        const FundingSpec& f = *s.funding;
        const Amount cost = Amount(static_cast<uint64_t>(f.peel_hops) * (f.peel_amount.sat() + s.fee.sat()));
        if (f.amount <= cost) fail(Errc::InfeasibleScenario, "funding amount cannot cover the peel hops");
        const size_t deposit = b.slot("mixer", 0);
        Event dep;
        dep.tag = Tag::Deposit;
        dep.date = f.date;
        dep.senders = {bank};
        dep.outputs = {OutSpec{deposit, f.amount, {}, true}};
        events.push_back(dep);
        size_t cur = deposit;
        for (uint32_t h = 0; h < f.peel_hops; ++h) {
            Event hop;
            hop.tag = Tag::Peel;
            hop.date = f.date;
            hop.senders = {cur};
            hop.outputs = {OutSpec{b.slot("peel_out", h), f.peel_amount, {}, false}};
            const bool last = h + 1 == f.peel_hops;
            const size_t next = last ? role_slot(f.final_recipient) : b.slot("mixer_hop", h);
            hop.continuation = next;
            hop.continuation_credit = !last;
            events.push_back(hop);
            cur = next;
        }
    }

    // campaign burns
    std::set<uint32_t> pinned;
    for (const BurnEntry& e : s.burns) {
        if (e.sender) {
            if (*e.sender >= burners.size()) bad_config("burn sender index out of range");
            pinned.insert(*e.sender);
        }
    }
    std::vector<size_t> rotation;
    for (uint32_t i = 0; i < burners.size(); ++i) {
        if (!pinned.count(i)) rotation.push_back(burners[i]);
    }
    size_t rot = 0;
    for (const BurnEntry& e : s.burns) {
        const RegistryMessage* msg = s.registry.find_id(e.message_id);
        const std::vector<Amount> split = even_split(e.total, e.tx_count, "burn " + e.message_id);
        for (const Amount& v : split) {
            Event ev;
            ev.tag = Tag::Burn;
            ev.date = e.date;
            ev.message_id = e.message_id;
            ev.pinned = e.sender.has_value();
            if (e.sender) {
                ev.senders = {burners[*e.sender]};
            } else {
                if (rotation.empty()) fail(Errc::InfeasibleScenario, "no unpinned burners");
                ev.senders = {rotation[rot++ % rotation.size()]};
            }
            const size_t recv = next_receiver(msg->receiver, std::nullopt, false);
            ev.outputs = {OutSpec{std::nullopt, v, to_bytes(msg->text), false},
                          OutSpec{recv, s.burn_receiver_output, {}, false}};
            events.push_back(std::move(ev));
        }
    }

    uint32_t noise_idx = 0;
    for (const NoiseBurn& n : s.noise) {
        for (const Amount& v : even_split(n.total, n.tx_count, "noise burn")) {
            Event ev;
            ev.tag = Tag::Noise;
            ev.date = n.date;
            ev.senders = {b.slot("noise", noise_idx++)};
            ev.outputs = {OutSpec{std::nullopt, v, to_bytes(n.payload), false}};
            events.push_back(std::move(ev));
        }
    }

    size_t payer_rr = 0;
    for (const PaymentEntry& p : s.payments) {
        for (uint32_t t = 0; t < p.tx_count; ++t) {
            Event ev;
            ev.tag = p.dedicated_sender ? Tag::Fanout : Tag::Payment;
            ev.date = p.date;
            ev.entity = p.entity;
            if (p.dedicated_sender) {
                ev.senders = {*fanout};
            } else {
                if (payers.empty()) fail(Errc::InfeasibleScenario, "payments need gru_payers");
                ev.senders = {payers[payer_rr++ % payers.size()]};
            }
            for (uint32_t k = 0; k < p.fan_out; ++k) {
                ev.outputs.push_back(OutSpec{next_receiver(p.entity, p.receiver, true), p.per_output, {}, false});
            }
            events.push_back(std::move(ev));
        }
    }

    // FSB co-spend consolidations
    std::vector<std::vector<size_t>> fsb_groups;
    for (uint32_t i = 0; i < fsb.size(); ++i) {
        std::vector<size_t> group = {fsb[i]};
        const uint32_t extra = i < c.fsb_cospend_extras.size() ? c.fsb_cospend_extras[i] : 0;
        for (uint32_t k = 0; k < extra; ++k) group.push_back(b.slot("fsb_extra", i * 1000 + k));
        if (extra > 0) {
            Event ev;
            ev.tag = Tag::Consolidation;
            ev.date = s.cospend_date;
            ev.senders = group;
            ev.continuation = fsb[i];
            for (size_t g : group) ev.needs.emplace_back(g, CONSOLIDATION_FUNDING);
            events.push_back(std::move(ev));
        }
        fsb_groups.push_back(std::move(group));
    }

    std::optional<size_t> subject;
    if (s.counterparty_subject) {
        subject = role_slot(*s.counterparty_subject);
        for (const CounterpartyEvent& e : s.counterparty) {
            Event ev;
            ev.tag = Tag::Counterparty;
            ev.date = e.date;
            ev.entity = e.entity;
            ev.senders = {*subject};
            ev.outputs = {OutSpec{entity_slot(e.entity), e.value, {}, false}};
            events.push_back(std::move(ev));
        }
    }

    std::optional<size_t> donation_addr;
    if (s.donation) {
        const DonationSpec& d = *s.donation;
        if (d.tx_count > burners.size()) fail(Errc::InfeasibleScenario, "more donation transactions than burners");
        const RegistryMessage* msg = s.registry.find_id(d.message_id);
        donation_addr = next_receiver(msg->receiver, std::nullopt, false);
        std::vector<Amount> dust;
        for (const DustGroup& g : d.dust) dust.insert(dust.end(), g.count, g.value);
        const size_t base = d.tx_count ? dust.size() / d.tx_count : 0;
        const size_t extra = d.tx_count ? dust.size() % d.tx_count : 0;
        size_t pos = 0;
        for (uint32_t t = 0; t < d.tx_count; ++t) {
            Event ev;
            ev.tag = Tag::Donation;
            ev.date = d.date;
            ev.message_id = d.message_id;
            const size_t sender = burners[burners.size() - d.tx_count + t];
            ev.senders = {sender};
            ev.outputs = {OutSpec{std::nullopt, Amount(0), to_bytes(msg->text), false},
                          OutSpec{*donation_addr, d.donation_output, {}, false}};
            const size_t n = base + (t < extra ? 1 : 0);
            for (size_t k = 0; k < n; ++k) ev.outputs.push_back(OutSpec{sender, dust[pos++], {}, false});
            events.push_back(std::move(ev));
        }
    }

    // exact funding from the bank for every campaign-era wallet
    std::map<size_t, Amount> need;
    std::vector<size_t> need_order;
    for (Event& ev : events) {
        if (ev.tag == Tag::Deposit || ev.tag == Tag::Legacy || ev.tag == Tag::Peel) continue;
        if (ev.date < s.funding_date) bad_config("campaign events must not precede funding_date");
        if (ev.needs.empty()) {
            Amount total = s.fee;
            for (const OutSpec& o : ev.outputs) total += o.value;
            ev.needs.emplace_back(ev.senders[0], total);
        }
        for (const auto& [slot, v] : ev.needs) {
            if (!need.count(slot)) need_order.push_back(slot);
            need[slot] += v;
        }
    }
    std::vector<Event> batch;
    for (size_t i = 0; i < need_order.size(); i += FUNDING_BATCH) {
        Event ev;
        ev.tag = Tag::Deposit;
        ev.date = s.funding_date;
        ev.senders = {bank};
        for (size_t k = i; k < std::min(i + FUNDING_BATCH, need_order.size()); ++k) {
            ev.outputs.push_back(OutSpec{need_order[k], need[need_order[k]], {}, true});
        }
        batch.push_back(std::move(ev));
    }
    events.insert(events.begin(), batch.begin(), batch.end());
    std::stable_sort(events.begin(), events.end(), [&](const Event& a, const Event& e) {
        const auto rank = [&](const Event& x) { return x.date == s.funding_date && x.tag == Tag::Deposit && x.senders[0] == bank ? 0 : 1; };
        if (a.date != e.date) return a.date < e.date;
        return rank(a) < rank(e);
    });
    if (!events.empty() && events.front().date < s.genesis_date) bad_config("events precede genesis_date");

    // block 0 funds the bank
    std::vector<Block> blocks;
    {
        Block g;
        g.transactions.push_back(coinbase_tx(0, SUBSIDY, b.at(bank).script));
        const TxId cb = txid(g.transactions[0]);
        b.credit(bank, OutPoint{cb, 0}, SUBSIDY);
        g.header.time = static_cast<uint32_t>(s.genesis_date.to_unix() + FIRST_BLOCK_OFFSET);
        g.header.bits = BITS_REGTEST;
        g.header.merkle_root = compute_merkle_root(g.transactions);
        blocks.push_back(std::move(g));
    }
    try {
        for (const Event& ev : events) b.emit(ev);
    } catch (const Error& e) {
        if (e.code() == Errc::Overflow) fail(Errc::InfeasibleScenario, e.what());
        throw;
    }

    // lay emitted transactions out into blocks, one run of blocks per day
    std::vector<Emitted>& em = b.emitted();
    size_t i = 0;
    while (i < em.size()) {
        size_t j = i;
        while (j < em.size() && em[j].date == em[i].date) ++j;
        const size_t day_txs = j - i;
        const size_t nblocks = (day_txs + s.txs_per_block - 1) / s.txs_per_block;
        const int64_t spacing = nblocks <= 96 ? 600 : 57600 / static_cast<int64_t>(nblocks);
        for (size_t k = 0; k < nblocks; ++k) {
            Block blk;
            const uint32_t height = static_cast<uint32_t>(blocks.size());
            const uint32_t time = static_cast<uint32_t>(em[i].date.to_unix() + FIRST_BLOCK_OFFSET + spacing * static_cast<int64_t>(k));
            const size_t lo = i + k * s.txs_per_block;
            const size_t hi = std::min(j, lo + s.txs_per_block);
            Amount fees;
            for (size_t t = lo; t < hi; ++t) {
                fees += s.fee;
                em[t].time = time;
            }
            blk.transactions.push_back(coinbase_tx(height, SUBSIDY + fees, b.at(miner).script));
            for (size_t t = lo; t < hi; ++t) blk.transactions.push_back(em[t].tx);
            blk.header.prev_hash = blocks.back().header.hash();
            blk.header.time = time;
            blk.header.bits = BITS_REGTEST;
            blk.header.nonce = height;
            blk.header.merkle_root = compute_merkle_root(blk.transactions);
            blocks.push_back(std::move(blk));
        }
        i = j;
    }

    SynthOutput out;
    for (const Block& blk : blocks) {
        const Bytes framed = frame_block(Network::Regtest, blk);
        out.block_file.insert(out.block_file.end(), framed.begin(), framed.end());
    }

    // external label feed
    std::set<size_t> external;
    for (const NamedAddress& n : s.named) external.insert(role_slot(n.slot));
    for (size_t id = 0; id < b.slots().size(); ++id) {
        const Slot& sl = b.at(id);
        if (sl.entity && !is_agency(*sl.entity)) external.insert(id);
    }
    for (size_t id : external) {
        out.external_labels.assign(b.at(id).encoded, EntityLabel{*b.at(id).entity, LabelSource::ExternalFile, 0});
    }

    // ground truth from the plan
    GroundTruth& gt = out.truth;
    gt.seed = s.seed;
    gt.blocks = blocks.size();
    for (const Block& blk : blocks) gt.transactions += blk.transactions.size();

    std::set<size_t> in_callout;
    std::map<std::string, CampaignTruth> camp;
    std::map<std::string, std::set<size_t>> camp_inputs;
    std::map<std::string, std::set<size_t>> camp_addrs;
    std::set<size_t> all_inputs;
    std::map<Entity, std::vector<std::pair<int64_t, Amount>>> pay_values;
    std::map<size_t, Amount> pinned_burns;
    for (const Emitted& e : em) {
        Amount opret;
        bool has_opret = false;
        for (size_t v = 0; v < e.tx.outputs.size(); ++v) {
            if (!e.output_slots[v]) {
                has_opret = true;
                opret += e.tx.outputs[v].value;
            }
        }
        if (has_opret) gt.daily_burns[e.date] += opret;
        if (is_callout(e.tag)) {
            CampaignTruth& row = camp[e.message_id];
            if (row.tx_count == 0) row.first_time = row.last_time = e.time;
            ++row.tx_count;
            row.first_time = std::min(row.first_time, e.time);
            row.last_time = std::max(row.last_time, e.time);
            row.burned += opret;
            for (size_t sl : e.input_slots) {
                camp_inputs[e.message_id].insert(sl);
                camp_addrs[e.message_id].insert(sl);
                all_inputs.insert(sl);
                in_callout.insert(sl);
            }
            for (const auto& sl : e.output_slots) {
                if (!sl) continue;
                camp_addrs[e.message_id].insert(*sl);
                in_callout.insert(*sl);
            }
        }
        if (e.tag == Tag::Burn) {
            ++gt.campaign_txs_by_date[e.date];
            ++gt.campaign_burn_txs;
            gt.campaign_burned += opret;
            if (e.pinned) pinned_burns[e.input_slots[0]] += opret;
        }
        if (e.tag == Tag::Payment || e.tag == Tag::Fanout) {
            Amount v;
            for (size_t k = 0; k < e.tx.outputs.size(); ++k) {
                if (e.output_slots[k] && *e.output_slots[k] != e.input_slots[0]) v += e.tx.outputs[k].value;
            }
            pay_values[e.entity].emplace_back(usd_value(v, e.date, s.prices).cents(), v);
        }
    }
    gt.campaign_unique_inputs = all_inputs.size();
    for (const RegistryMessage& m : s.registry.messages()) {
        CampaignTruth row = camp.count(m.id) ? camp[m.id] : CampaignTruth{};
        row.message_id = m.id;
        row.unique_inputs = camp_inputs[m.id].size();
        row.unique_addresses = camp_addrs[m.id].size();
        gt.campaign.push_back(row);
    }
    for (const auto& [sl, v] : pinned_burns) gt.pinned_sender_burns[b.at(sl).encoded] = v;

    // labels: external feed, callout participants, then FSB co-spend extras
    std::map<size_t, Entity> truth_labels;
    for (size_t id : external) truth_labels[id] = *b.at(id).entity;
    for (size_t id : in_callout) {
        if (b.at(id).entity) truth_labels[id] = *b.at(id).entity;
    }
    for (const std::vector<size_t>& g : fsb_groups) {
        if (!truth_labels.count(g[0])) continue;
        for (size_t id : g) truth_labels[id] = Entity::FSB;
    }
    for (const auto& [id, e] : truth_labels) gt.labels[b.at(id).encoded] = e;

    if (s.donation) {
        DonationSummary d;
        int64_t cents = 0;
        int64_t lo = INT64_MAX;
        for (const Emitted& e : em) {
            if (e.tag != Tag::Donation) continue;
            ++d.tx_count;
            d.txids.push_back(e.id);
            d.total_outputs += e.tx.outputs.size();
            Amount donated;
            for (size_t k = 0; k < e.tx.outputs.size(); ++k) {
                if (!e.output_slots[k]) continue;
                ++d.value_outputs;
                const int64_t cv = usd_value(e.tx.outputs[k].value, e.date, s.prices).cents();
                cents += cv;
                lo = std::min(lo, cv);
                if (*e.output_slots[k] == *donation_addr) {
                    ++d.donation_outputs;
                    donated += e.tx.outputs[k].value;
                }
            }
            d.donated += donated;
            d.donated_usd += usd_value(donated, e.date, s.prices);
        }
        if (d.value_outputs) {
            d.output_mean = UsdCents(half_up(cents, static_cast<int64_t>(d.value_outputs)));
            d.output_min = UsdCents(lo);
        }
        gt.donation = d;
    }

    for (Entity e : AGENCIES) gt.payments.push_back(truth_payment_row(e, pay_values[e]));

    // clusters by construction: FSB groups, every other agency address alone
    std::map<size_t, size_t> cluster_of;
    std::vector<std::vector<size_t>> clusters;
    for (const std::vector<size_t>& g : fsb_groups) {
        if (!truth_labels.count(g[0])) continue;
        for (size_t id : g) cluster_of[id] = clusters.size();
        clusters.push_back(g);
    }
    for (const auto& [id, e] : truth_labels) {
        if (!is_agency(e) || cluster_of.count(id)) continue;
        cluster_of[id] = clusters.size();
        clusters.push_back({id});
    }
    std::vector<std::set<TxId>> touching(clusters.size());
    for (const Emitted& e : em) {
        if (is_callout(e.tag)) continue;
        for (size_t sl : e.input_slots) {
            if (cluster_of.count(sl)) touching[cluster_of[sl]].insert(e.id);
        }
        for (const auto& sl : e.output_slots) {
            if (sl && cluster_of.count(*sl)) touching[cluster_of[*sl]].insert(e.id);
        }
    }
    for (Entity ent : AGENCIES) {
        std::vector<std::pair<size_t, size_t>> rows;
        for (size_t k = 0; k < clusters.size(); ++k) {
            if (truth_labels[clusters[k][0]] == ent) rows.emplace_back(clusters[k].size(), touching[k].size());
        }
        gt.clusters.push_back(truth_cluster_row(ent, rows));
    }

    if (s.funding) {
        PeelTrace tr;
        bool started = false;
        for (const Emitted& e : em) {
            if (!started && e.tag == Tag::Deposit && e.output_slots[0] == b.slot("mixer", 0)) {
                tr.start = OutPoint{e.id, 0};
                started = true;
            } else if (e.tag == Tag::Peel) {
                const uint32_t v = e.continuation_vout;
                const size_t sl = *e.output_slots[v];
                tr.hops.push_back(PeelHop{e.id, v, e.tx.outputs[v].value, b.at(sl).encoded});
            }
        }
        tr.end = PeelEnd::NoSuccessor;
        if (!tr.hops.empty() && gt.labels.count(*tr.hops.back().address)) tr.end = PeelEnd::ReachedLabeled;
        gt.trace = tr;
    }

    if (subject) {
        gt.counterparty_address = b.at(*subject).encoded;
        for (const Emitted& e : em) {
            if (e.tag != Tag::Counterparty) continue;
            const size_t cp = *e.output_slots[0];
            CounterpartyRow row;
            row.time = e.time;
            row.txid = e.id;
            row.counterparty = b.at(cp).encoded;
            row.entity = e.entity;
            row.direction = Direction::Out;
            row.value = e.tx.outputs[0].value;
            if (s.prices.covers(e.date)) row.usd = usd_value(row.value, e.date, s.prices);
            gt.counterparty.push_back(row);
        }
    }

    for (const Emitted& e : em) {
        if (e.tag != Tag::Fanout) continue;
        FanoutTruth f;
        f.txid = e.id;
        f.date = e.date;
        f.inputs = e.tx.inputs.size();
        f.outputs = e.tx.outputs.size();
        f.per_output = e.tx.outputs[0].value;
        for (const TxOutput& o : e.tx.outputs) f.total += o.value;
        f.usd_total = usd_value(f.total, e.date, s.prices);
        gt.fanout = f;
        break;
    }

    out.blocks = std::move(blocks);
    return out;
}

void write_synth_dir(const ChainScenario& scenario, const SynthOutput& out, const std::filesystem::path& dir)
{
    write_file(dir / "blocks" / "blk00000.dat", ByteSpan(out.block_file));
    std::ostringstream labels;
    export_labels(out.external_labels, labels);
    write_file(dir / "labels.csv", labels.str());
    std::ostringstream prices;
    export_prices(scenario.prices, prices);
    write_file(dir / "prices.csv", prices.str());
    write_file(dir / "registry.json", scenario.registry.to_json());
    write_file(dir / "scenario.json", scenario_to_json(scenario));
    write_file(dir / "ground_truth.json", out.truth.to_json());
}

} // namespace burnscope
