// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_LEDGER_HPP
#define BURNSCOPE_LEDGER_HPP

#include <burnscope/address.hpp>
#include <burnscope/amount.hpp>
#include <burnscope/script.hpp>
#include <burnscope/wire.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace burnscope {

inline constexpr uint32_t SNAPSHOT_VERSION = 1;

enum class Role { Input, Output };
std::string_view role_name(Role r);

struct HistoryEntry {
    TxId txid;
    Role role{Role::Output};
    uint32_t time{0};

    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct IndexedOutput {
    Amount value;
    std::optional<std::string> address;
    ScriptKind kind{ScriptKind::NonStandard};
};

struct IndexedTx {
    TxId id;
    Transaction tx;
    uint32_t height{0};
    uint32_t time{0};
};

struct BlockInfo {
    BlockHeader header;
    Hash256 hash{};
    uint32_t height{0};
    size_t first_tx{0};
    size_t tx_count{0};
};

struct MissingPrevout {
    TxId txid;
    uint32_t input{0};
    OutPoint prevout;
};

struct IngestionReport {
    size_t blocks{0};
    size_t transactions{0};
    size_t inputs{0};
    size_t outputs{0};
    size_t op_return_outputs{0};
    size_t missing_prevouts{0};
    size_t merkle_mismatches{0};
};

struct ResolvedInput {
    OutPoint previous;
    std::optional<std::string> address;
    /** Unset when the previous output is outside the indexed window. */
    std::optional<Amount> value;
    bool coinbase{false};
};

struct ResolvedOutput {
    uint32_t vout{0};
    Amount value;
    std::optional<std::string> address;
    ScriptKind kind{ScriptKind::NonStandard};
    std::optional<Bytes> op_return_payload;
    bool op_return_standard{false};
};

struct ResolvedTransaction {
    TxId txid;
    uint32_t time{0};
    uint32_t height{0};
    bool coinbase{false};
    std::vector<ResolvedInput> inputs;
    std::vector<ResolvedOutput> outputs;
    /** Σ inputs − Σ outputs; unset when any input is unresolved. Zero for coinbase. */
    std::optional<Amount> fee;

    std::set<std::string> input_addresses() const;
    std::set<std::string> output_addresses() const;
    Amount output_total() const;
    /** Σ of values attached to OP_RETURN outputs. */
    Amount op_return_value() const;
    bool has_op_return() const;
};

/**
 * Append-only forensic index over blocks applied in chain order. Spent
 * outputs stay resolvable. Not thread-safe while being built; read-only
 * use afterwards is safe from any number of threads.
 */
class LedgerIndex
{
public:
    explicit LedgerIndex(Network net = Network::Mainnet) : m_network(net) {}

    void apply_block(const Block& block);

    Network network() const { return m_network; }
    const std::vector<IndexedTx>& transactions() const { return m_txs; }
    const std::vector<BlockInfo>& blocks() const { return m_blocks; }
    const std::vector<MissingPrevout>& missing_prevouts() const { return m_missing; }
    IngestionReport report() const;

    const IndexedTx* find(const TxId& id) const;
    const IndexedOutput* output(const OutPoint& op) const;
    /** The transaction spending op, if indexed. */
    std::optional<TxId> spender(const OutPoint& op) const;

    /** Throws UnknownTx. */
    ResolvedTransaction resolve(const TxId& id) const;
    ResolvedTransaction resolve(const IndexedTx& itx) const;
    std::vector<ResolvedTransaction> resolve_all() const;

    /** Chronological; empty for unseen addresses. */
    std::vector<HistoryEntry> history(const std::string& address) const;
    /** Every address seen in any output, sorted. */
    std::vector<std::string> addresses() const;

    /** Versioned single-file image; identical block sequences give identical bytes. */
    Bytes snapshot() const;
    static LedgerIndex from_snapshot(ByteSpan bytes);

    /** Sorted by txid then vout: txid,vout,value_sat,address,script_class */
    void export_outputs_csv(std::ostream& out) const;

private:
    Network m_network;
    std::vector<BlockInfo> m_blocks;
    std::vector<IndexedTx> m_txs;
    std::unordered_map<TxId, size_t> m_tx_pos;
    std::unordered_map<OutPoint, IndexedOutput> m_outputs;
    std::unordered_map<OutPoint, TxId> m_spenders;
    std::unordered_map<std::string, std::vector<HistoryEntry>> m_history;
    std::vector<MissingPrevout> m_missing;
    size_t m_inputs{0};
    size_t m_op_returns{0};
    size_t m_merkle_mismatches{0};
};

LedgerIndex build_index(const std::vector<Block>& blocks, Network net = Network::Mainnet);
ResolvedTransaction resolve_transaction(const LedgerIndex& index, const TxId& id);
std::vector<HistoryEntry> address_history(const LedgerIndex& index, const std::string& address);

/**
 * Reorders blocks so every block follows its parent. Blocks whose parent is
 * absent start a new run, taken in file order.
 */
std::vector<Block> order_chain(std::vector<Block> blocks);

} // namespace burnscope

#endif // BURNSCOPE_LEDGER_HPP
