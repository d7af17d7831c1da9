// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/address.hpp>
#include <burnscope/attrib.hpp>
#include <burnscope/error.hpp>
#include <burnscope/stats.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace burnscope {

namespace {

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

Entity entity_from_json(const nlohmann::json& j, const char* what)
{
    if (!j.is_string()) fail(Errc::BadConfig, std::string("registry: ") + what + " must be a string");
    const auto e = parse_entity(j.get<std::string>());
    if (!e) fail(Errc::BadConfig, std::string("registry: unknown entity ") + j.get<std::string>());
    return *e;
}

// Union-find with path halving; ranks keep trees shallow.
class DisjointSet
{
public:
    size_t add()
    {
        m_parent.push_back(m_parent.size());
        m_rank.push_back(0);
        return m_parent.size() - 1;
    }
    size_t find(size_t x)
    {
        while (m_parent[x] != x) {
            m_parent[x] = m_parent[m_parent[x]];
            x = m_parent[x];
        }
        return x;
    }
    void unite(size_t a, size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (m_rank[a] < m_rank[b]) std::swap(a, b);
        m_parent[b] = a;
        if (m_rank[a] == m_rank[b]) ++m_rank[a];
    }

private:
    std::vector<size_t> m_parent;
    std::vector<uint8_t> m_rank;
};

} // namespace

std::string_view entity_name(Entity e)
{
    switch (e) {
    case Entity::GRU: return "GRU";
    case Entity::SVR: return "SVR";
    case Entity::FSB: return "FSB";
    case Entity::MIXER: return "MIXER";
    case Entity::DONATION: return "DONATION";
    case Entity::EXCHANGE: return "EXCHANGE";
    case Entity::RANSOMWARE: return "RANSOMWARE";
    case Entity::GAMBLING: return "GAMBLING";
    case Entity::UNKNOWN: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::optional<Entity> parse_entity(std::string_view name)
{
    for (Entity e : ALL_ENTITIES) {
        if (entity_name(e) == name) return e;
    }
    return std::nullopt;
}

bool is_agency(Entity e)
{
    return e == Entity::GRU || e == Entity::SVR || e == Entity::FSB;
}

std::string_view label_source_name(LabelSource s)
{
    switch (s) {
    case LabelSource::Callout: return "callout";
    case LabelSource::ExternalFile: return "external-file";
    case LabelSource::ClusterPropagated: return "cluster-propagated";
    }
    return "external-file";
}

std::optional<LabelSource> parse_label_source(std::string_view name)
{
    for (LabelSource s : {LabelSource::Callout, LabelSource::ExternalFile, LabelSource::ClusterPropagated}) {
        if (label_source_name(s) == name) return s;
    }
    return std::nullopt;
}

bool LabelTable::assign(const std::string& address, const EntityLabel& label, std::optional<TxId> txid)
{
    const auto [it, inserted] = m_labels.emplace(address, label);
    if (inserted) return true;
    if (it->second.entity == label.entity) {
        it->second.first_seen = std::min(it->second.first_seen, label.first_seen);
        return true;
    }
    m_conflicts.push_back(LabelConflict{address, it->second, label, txid});
    return false;
}

const EntityLabel* LabelTable::find(const std::string& address) const
{
    const auto it = m_labels.find(address);
    return it == m_labels.end() ? nullptr : &it->second;
}

std::optional<Entity> LabelTable::entity_of(const std::string& address) const
{
    const EntityLabel* l = find(address);
    if (!l) return std::nullopt;
    return l->entity;
}

std::vector<std::string> LabelTable::addresses_of(Entity e) const
{
    std::vector<std::string> out;
    for (const auto& [addr, label] : m_labels) {
        if (label.entity == e) out.push_back(addr);
    }
    return out;
}

LabelTable load_labels(std::istream& in)
{
    LabelTable table;
    std::string line;
    bool header = false;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (!header) {
            if (f.size() != 3 || f[0] != "address" || f[1] != "label" || f[2] != "source") {
                fail(Errc::BadConfig, "label file header must be address,label,source");
            }
            header = true;
            continue;
        }
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (f.size() != 3) fail(Errc::BadLabel, "label row needs three fields" + where);
        const std::string address(trim(f[0]));
        if (!decode_address(address)) fail(Errc::BadAddress, "invalid address " + address + where);
        const auto entity = parse_entity(trim(f[1]));
        if (!entity) fail(Errc::BadLabel, "unknown label " + f[1] + where);
        const auto source = parse_label_source(trim(f[2]));
        if (!source) fail(Errc::BadLabel, "unknown label source " + f[2] + where);
        table.assign(address, EntityLabel{*entity, *source, 0});
    }
    if (!header) fail(Errc::BadConfig, "label file has no header");
    return table;
}

LabelTable load_labels_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    return load_labels(in);
}

void export_labels(const LabelTable& labels, std::ostream& out)
{
    out << SCHEMA_LINE << "address,label,source\n";
    for (const auto& [addr, label] : labels.entries()) {
        out << csv_escape(addr) << ',' << entity_name(label.entity) << ',' << label_source_name(label.source) << '\n';
    }
}

MessageRegistry MessageRegistry::defaults()
{
    MessageRegistry r;
    r.add_message({"gru-to-svr", "GRU to SVR", {}, Entity::GRU, Entity::SVR});
    r.add_message({"gru-to-fsb", "GRU to FSB", {}, Entity::GRU, Entity::FSB});
    r.add_message({"gru-to-gru", "GRU to GRU", {}, Entity::GRU, Entity::GRU});
    r.add_message({"donation", "Helping Ukraine with money from GRU hackers", {}, Entity::GRU, Entity::DONATION});
    return r;
}

void MessageRegistry::add_message(RegistryMessage msg)
{
    msg.text = nfc_normalize(msg.text);
    for (std::string& v : msg.variants) v = nfc_normalize(v);
    const size_t idx = m_messages.size();
    const auto claim = [&](const std::string& text) {
        if (!m_exact.emplace(text, idx).second) fail(Errc::BadConfig, "duplicate registry text: " + text);
    };
    if (find_id(msg.id)) fail(Errc::BadConfig, "duplicate registry id: " + msg.id);
    claim(msg.text);
    for (const std::string& v : msg.variants) claim(v);
    m_messages.push_back(std::move(msg));
}

void MessageRegistry::add_alias(std::string_view alias, Entity e)
{
    m_aliases[ascii_lower(nfc_normalize(alias))] = e;
}

void MessageRegistry::set_separators(std::vector<std::string> seps)
{
    if (seps.empty()) fail(Errc::BadConfig, "registry needs at least one separator");
    for (const std::string& s : seps) {
        if (s.empty()) fail(Errc::BadConfig, "empty separator");
    }
    m_separators = std::move(seps);
}

const RegistryMessage* MessageRegistry::find_exact(std::string_view nfc_text) const
{
    const auto it = m_exact.find(nfc_text);
    return it == m_exact.end() ? nullptr : &m_messages[it->second];
}

const RegistryMessage* MessageRegistry::find_pair(Entity sender, Entity receiver) const
{
    for (const RegistryMessage& m : m_messages) {
        if (m.sender == sender && m.receiver == receiver) return &m;
    }
    return nullptr;
}

const RegistryMessage* MessageRegistry::find_id(std::string_view id) const
{
    for (const RegistryMessage& m : m_messages) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

std::optional<Entity> MessageRegistry::resolve_entity(std::string_view word) const
{
    const std::string key = ascii_lower(trim(word));
    const auto it = m_aliases.find(key);
    if (it != m_aliases.end()) return it->second;
    for (Entity e : ALL_ENTITIES) {
        if (ascii_lower(entity_name(e)) == key) return e;
    }
    return std::nullopt;
}

MessageRegistry MessageRegistry::from_json(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::BadConfig, std::string("registry is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("messages") || !j["messages"].is_array()) {
        fail(Errc::BadConfig, "registry needs a messages array");
    }
    MessageRegistry r;
    try {
        for (const auto& m : j["messages"]) {
            RegistryMessage msg;
            msg.id = m.at("id").get<std::string>();
            msg.text = m.at("text").get<std::string>();
            msg.sender = entity_from_json(m.at("sender"), "sender");
            msg.receiver = entity_from_json(m.at("receiver"), "receiver");
            if (m.contains("variants")) msg.variants = m["variants"].get<std::vector<std::string>>();
            r.add_message(std::move(msg));
        }
        if (j.contains("separators")) r.set_separators(j["separators"].get<std::vector<std::string>>());
        if (j.contains("aliases")) {
            for (const auto& [alias, ent] : j["aliases"].items()) r.add_alias(alias, entity_from_json(ent, "alias"));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::BadConfig, std::string("registry: ") + e.what());
    }
    return r;
}

MessageRegistry MessageRegistry::from_file(const std::filesystem::path& path)
{
    return from_json(read_text_file(path));
}

std::string MessageRegistry::to_json() const
{
    nlohmann::ordered_json j;
    j["schema_version"] = SCHEMA_VERSION;
    j["separators"] = m_separators;
    nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
    for (const RegistryMessage& m : m_messages) {
        nlohmann::ordered_json o;
        o["id"] = m.id;
        o["text"] = m.text;
        o["sender"] = entity_name(m.sender);
        o["receiver"] = entity_name(m.receiver);
        o["variants"] = m.variants;
        msgs.push_back(std::move(o));
    }
    j["messages"] = std::move(msgs);
    nlohmann::ordered_json aliases = nlohmann::ordered_json::object();
    for (const auto& [alias, e] : m_aliases) aliases[alias] = entity_name(e);
    j["aliases"] = std::move(aliases);
    return j.dump(2) + "\n";
}

std::optional<Callout> match_callout(const CalloutText& text, const MessageRegistry& registry)
{
    if (text.encoding != TextEncoding::Utf8) return std::nullopt;
    if (const RegistryMessage* m = registry.find_exact(text.decoded)) {
        return Callout{m->id, text.raw, text.decoded, m->sender, m->receiver, false};
    }
    const std::string& s = text.decoded;
    const size_t end = s.find_first_of(".!?\n");
    const std::string_view sentence = std::string_view(s).substr(0, end);
    for (const std::string& sep : registry.separators()) {
        const size_t pos = sentence.find(sep);
        if (pos == std::string_view::npos) continue;
        const auto sender = registry.resolve_entity(sentence.substr(0, pos));
        const auto receiver = registry.resolve_entity(sentence.substr(pos + sep.size()));
        if (!sender || !receiver) continue;
        const RegistryMessage* m = registry.find_pair(*sender, *receiver);
        std::string id = m ? m->id
                           : std::string(entity_name(*sender)) + " to " + std::string(entity_name(*receiver));
        return Callout{std::move(id), text.raw, text.decoded, *sender, *receiver, true};
    }
    return std::nullopt;
}

std::optional<Callout> transaction_callout(const ResolvedTransaction& tx, const MessageRegistry& registry)
{
    for (const ResolvedOutput& o : tx.outputs) {
        if (o.kind != ScriptKind::OpReturn || !o.op_return_payload) continue;
        if (auto c = match_callout(decode_payload_text(*o.op_return_payload), registry)) return c;
    }
    return std::nullopt;
}

LabelTable propagate_labels(const std::vector<ResolvedTransaction>& txs, const MessageRegistry& registry,
                            LabelTable base)
{
    for (const ResolvedTransaction& tx : txs) {
        if (tx.coinbase) continue;
        const auto callout = transaction_callout(tx, registry);
        if (!callout) continue;
        const EntityLabel sender{callout->sender, LabelSource::Callout, tx.time};
        const EntityLabel receiver{callout->receiver, LabelSource::Callout, tx.time};
        std::set<std::string> inputs;
        for (const ResolvedInput& in : tx.inputs) {
            if (!in.address || !inputs.insert(*in.address).second) continue;
            base.assign(*in.address, sender, tx.txid);
        }
        std::set<std::string> done;
        for (const ResolvedOutput& o : tx.outputs) {
            if (!o.address || !done.insert(*o.address).second) continue;
            base.assign(*o.address, inputs.count(*o.address) ? sender : receiver, tx.txid);
        }
    }
    return base;
}

std::set<TxId> hacker_phase_exclusions(const std::vector<ResolvedTransaction>& txs, const MessageRegistry& registry)
{
    std::set<TxId> out;
    for (const ResolvedTransaction& tx : txs) {
        if (!tx.coinbase && transaction_callout(tx, registry)) out.insert(tx.txid);
    }
    return out;
}

ClusterSet cospend_clusters(const std::vector<ResolvedTransaction>& txs, const std::set<TxId>& exclusions,
                            const std::vector<std::string>& universe)
{
    std::map<std::string, size_t> ids;
    DisjointSet dsu;
    const auto id_of = [&](const std::string& a) {
        const auto [it, inserted] = ids.emplace(a, 0);
        if (inserted) it->second = dsu.add();
        return it->second;
    };
    for (const std::string& a : universe) id_of(a);
    for (const ResolvedTransaction& tx : txs) {
        for (const ResolvedOutput& o : tx.outputs) {
            if (o.address) id_of(*o.address);
        }
        std::optional<size_t> first;
        for (const ResolvedInput& in : tx.inputs) {
            if (!in.address) continue;
            const size_t id = id_of(*in.address);
            if (tx.coinbase || exclusions.count(tx.txid)) continue;
            if (first) {
                dsu.unite(*first, id);
            } else {
                first = id;
            }
        }
    }

    // ids iterates in address order, so the first member seen per root is the smallest
    ClusterSet out;
    std::map<size_t, size_t> root_to_cluster;
    for (const auto& [addr, id] : ids) {
        const size_t root = dsu.find(id);
        const auto [it, inserted] = root_to_cluster.emplace(root, out.clusters.size());
        if (inserted) out.clusters.emplace_back();
        out.clusters[it->second].push_back(addr);
        out.cluster_of[addr] = it->second;
    }
    return out;
}

size_t propagate_cluster_labels(const ClusterSet& clusters, LabelTable& labels)
{
    size_t added = 0;
    for (const std::vector<std::string>& members : clusters.clusters) {
        std::set<Entity> entities;
        uint32_t first_seen = UINT32_MAX;
        for (const std::string& a : members) {
            if (const EntityLabel* l = labels.find(a)) {
                entities.insert(l->entity);
                first_seen = std::min(first_seen, l->first_seen);
            }
        }
        if (entities.size() != 1) continue;
        const EntityLabel label{*entities.begin(), LabelSource::ClusterPropagated, first_seen};
        for (const std::string& a : members) {
            if (labels.contains(a)) continue;
            labels.assign(a, label);
            ++added;
        }
    }
    return added;
}

const ClusterRow& ClusterStats::row(Entity e) const
{
    for (const ClusterRow& r : rows) {
        if (r.entity == e) return r;
    }
    fail(Errc::BadConfig, "no cluster row for " + std::string(entity_name(e)));
}

ClusterStats cluster_stats(const ClusterSet& clusters, const LabelTable& labels,
                           const std::vector<ResolvedTransaction>& txs, const std::set<TxId>& exclusions)
{
    std::vector<std::set<TxId>> touching(clusters.size());
    for (const ResolvedTransaction& tx : txs) {
        if (tx.coinbase || exclusions.count(tx.txid)) continue;
        const auto touch = [&](const std::optional<std::string>& a) {
            if (!a) return;
            const auto it = clusters.cluster_of.find(*a);
            if (it != clusters.cluster_of.end()) touching[it->second].insert(tx.txid);
        };
        for (const ResolvedInput& in : tx.inputs) touch(in.address);
        for (const ResolvedOutput& o : tx.outputs) touch(o.address);
    }

    ClusterStats st;
    st.total_clusters = clusters.size();
    std::map<Entity, std::vector<size_t>> members_of;
    for (size_t c = 0; c < clusters.size(); ++c) {
        std::set<Entity> agencies;
        for (const std::string& a : clusters.clusters[c]) {
            const auto e = labels.entity_of(a);
            if (e && is_agency(*e)) agencies.insert(*e);
        }
        if (agencies.size() > 1) st.violations.push_back(c);
        for (Entity e : agencies) members_of[e].push_back(c);
    }
    for (Entity e : AGENCIES) {
        ClusterRow row;
        row.entity = e;
        std::vector<double> sizes;
        std::vector<double> counts;
        for (size_t c : members_of[e]) {
            sizes.push_back(static_cast<double>(clusters.clusters[c].size()));
            counts.push_back(static_cast<double>(touching[c].size()));
            row.addresses += clusters.clusters[c].size();
        }
        row.clusters = sizes.size();
        row.size_mean = stats::mean(sizes);
        row.size_std = stats::population_std(sizes);
        row.tx_mean = stats::mean(counts);
        row.tx_std = stats::population_std(counts);
        st.rows.push_back(row);
    }
    return st;
}

void export_clusters(const ClusterSet& clusters, const LabelTable& labels, std::ostream& out)
{
    out << SCHEMA_LINE << "cluster_id,address,entity\n";
    for (size_t c = 0; c < clusters.size(); ++c) {
        for (const std::string& a : clusters.clusters[c]) {
            const auto e = labels.entity_of(a);
            out << c << ',' << csv_escape(a) << ',' << (e ? entity_name(*e) : std::string_view("")) << '\n';
        }
    }
}

} // namespace burnscope
