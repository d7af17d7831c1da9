// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_ATTRIB_HPP
#define BURNSCOPE_ATTRIB_HPP

#include <burnscope/ledger.hpp>
#include <burnscope/script.hpp>

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace burnscope {

enum class Entity { GRU, SVR, FSB, MIXER, DONATION, EXCHANGE, RANSOMWARE, GAMBLING, UNKNOWN };

inline constexpr Entity ALL_ENTITIES[] = {Entity::GRU,      Entity::SVR,        Entity::FSB,
                                          Entity::MIXER,    Entity::DONATION,   Entity::EXCHANGE,
                                          Entity::RANSOMWARE, Entity::GAMBLING, Entity::UNKNOWN};

/** The three agencies named by the callouts. */
inline constexpr Entity AGENCIES[] = {Entity::GRU, Entity::SVR, Entity::FSB};

std::string_view entity_name(Entity e);
/** Exact upper-case names only. */
std::optional<Entity> parse_entity(std::string_view name);
bool is_agency(Entity e);

enum class LabelSource { Callout, ExternalFile, ClusterPropagated };

std::string_view label_source_name(LabelSource s);
std::optional<LabelSource> parse_label_source(std::string_view name);

struct EntityLabel {
    Entity entity{Entity::UNKNOWN};
    LabelSource source{LabelSource::ExternalFile};
    uint32_t first_seen{0};
    friend bool operator==(const EntityLabel&, const EntityLabel&) = default;
};

struct LabelConflict {
    std::string address;
    EntityLabel kept;
    EntityLabel rejected;
    /** Transaction that carried the rejected assignment, when there was one. */
    std::optional<TxId> txid;
};

/** One primary label per address; disagreeing assignments are kept as conflicts. */
class LabelTable
{
public:
    /** Returns false and records a conflict when address already has a different entity. */
    bool assign(const std::string& address, const EntityLabel& label, std::optional<TxId> txid = std::nullopt);

    const EntityLabel* find(const std::string& address) const;
    std::optional<Entity> entity_of(const std::string& address) const;
    bool contains(const std::string& address) const { return m_labels.count(address) != 0; }

    const std::map<std::string, EntityLabel>& entries() const { return m_labels; }
    const std::vector<LabelConflict>& conflicts() const { return m_conflicts; }
    size_t size() const { return m_labels.size(); }
    std::vector<std::string> addresses_of(Entity e) const;

private:
    std::map<std::string, EntityLabel> m_labels;
    std::vector<LabelConflict> m_conflicts;
};

/**
 * Reads `address,label,source` rows. Lines starting with '#' are skipped.
 * Throws BadLabel on unknown labels or sources, BadAddress on addresses that
 * fail checksum validation, BadConfig on a malformed header.
 */
LabelTable load_labels(std::istream& in);
LabelTable load_labels_file(const std::filesystem::path& path);
/** Sorted by address, with first_seen dropped. */
void export_labels(const LabelTable& labels, std::ostream& out);

struct RegistryMessage {
    std::string id;
    /** English text, NFC. */
    std::string text;
    /** Further exact forms of the same message, e.g. the Cyrillic original. */
    std::vector<std::string> variants;
    Entity sender{Entity::UNKNOWN};
    Entity receiver{Entity::UNKNOWN};
};

class MessageRegistry
{
public:
    /** The four English callouts; no Cyrillic forms. */
    static MessageRegistry defaults();
    /** Throws BadConfig. */
    static MessageRegistry from_json(std::string_view json);
    static MessageRegistry from_file(const std::filesystem::path& path);
    std::string to_json() const;

    void add_message(RegistryMessage msg);
    void add_alias(std::string_view alias, Entity e);
    void set_separators(std::vector<std::string> seps);

    const std::vector<RegistryMessage>& messages() const { return m_messages; }
    const std::vector<std::string>& separators() const { return m_separators; }
    const RegistryMessage* find_exact(std::string_view nfc_text) const;
    const RegistryMessage* find_pair(Entity sender, Entity receiver) const;
    const RegistryMessage* find_id(std::string_view id) const;
    /** Entity names and aliases, ASCII case-insensitive. */
    std::optional<Entity> resolve_entity(std::string_view word) const;

private:
    std::vector<RegistryMessage> m_messages;
    std::map<std::string, size_t, std::less<>> m_exact;
    std::map<std::string, Entity, std::less<>> m_aliases;
    std::vector<std::string> m_separators{" to "};
};

struct Callout {
    std::string message_id;
    Bytes raw;
    std::string decoded;
    Entity sender{Entity::UNKNOWN};
    Entity receiver{Entity::UNKNOWN};
    bool fallback{false};
};

/**
 * Exact registry text first. Otherwise the first sentence is split on each
 * configured separator and both halves must name entities.
 */
std::optional<Callout> match_callout(const CalloutText& text, const MessageRegistry& registry);

/** First OP_RETURN output of tx carrying a recognised callout. */
std::optional<Callout> transaction_callout(const ResolvedTransaction& tx, const MessageRegistry& registry);

/**
 * Applies callout labels in transaction order on top of base. Inputs take
 * the sender; outputs take the receiver unless they reuse an input address.
 */
LabelTable propagate_labels(const std::vector<ResolvedTransaction>& txs, const MessageRegistry& registry,
                            LabelTable base = {});

/** Transactions attributed to the campaign actor, kept out of clustering. */
std::set<TxId> hacker_phase_exclusions(const std::vector<ResolvedTransaction>& txs, const MessageRegistry& registry);

struct ClusterSet {
    /** Each cluster sorted; clusters ordered by their smallest member. */
    std::vector<std::vector<std::string>> clusters;
    std::map<std::string, size_t> cluster_of;

    size_t size() const { return clusters.size(); }
};

/**
 * Co-spend clustering. Every address in universe and every address seen in
 * txs appears in exactly one cluster.
 */
ClusterSet cospend_clusters(const std::vector<ResolvedTransaction>& txs, const std::set<TxId>& exclusions,
                            const std::vector<std::string>& universe = {});

/** Labels unlabeled members of clusters whose labeled members agree on one entity. */
size_t propagate_cluster_labels(const ClusterSet& clusters, LabelTable& labels);

struct ClusterRow {
    Entity entity{Entity::UNKNOWN};
    size_t addresses{0};
    size_t clusters{0};
    double size_mean{0};
    double size_std{0};
    double tx_mean{0};
    double tx_std{0};
};

struct ClusterStats {
    /** One row per agency, GRU, SVR, FSB. */
    std::vector<ClusterRow> rows;
    size_t total_clusters{0};
    /** Ids of clusters holding addresses of two or more agencies. */
    std::vector<size_t> violations;

    const ClusterRow& row(Entity e) const;
};

ClusterStats cluster_stats(const ClusterSet& clusters, const LabelTable& labels,
                           const std::vector<ResolvedTransaction>& txs, const std::set<TxId>& exclusions);

/** `cluster_id,address,entity` */
void export_clusters(const ClusterSet& clusters, const LabelTable& labels, std::ostream& out);

} // namespace burnscope

#endif // BURNSCOPE_ATTRIB_HPP
