// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/error.hpp>
#include <burnscope/ledger.hpp>

#include <algorithm>
#include <map>

namespace burnscope {

namespace {

constexpr std::array<uint8_t, 8> SNAPSHOT_MAGIC = {'B', 'S', 'C', 'O', 'P', 'E', 'I', 'X'};

void add_history(std::vector<HistoryEntry>& v, const TxId& id, Role role, uint32_t time)
{
    v.push_back(HistoryEntry{id, role, time});
}

} // namespace

std::string_view role_name(Role r)
{
    return r == Role::Input ? "input" : "output";
}

std::set<std::string> ResolvedTransaction::input_addresses() const
{
    std::set<std::string> out;
    for (const ResolvedInput& in : inputs) {
        if (in.address) out.insert(*in.address);
    }
    return out;
}

std::set<std::string> ResolvedTransaction::output_addresses() const
{
    std::set<std::string> out;
    for (const ResolvedOutput& o : outputs) {
        if (o.address) out.insert(*o.address);
    }
    return out;
}

Amount ResolvedTransaction::output_total() const
{
    Amount total;
    for (const ResolvedOutput& o : outputs) total += o.value;
    return total;
}

Amount ResolvedTransaction::op_return_value() const
{
    Amount total;
    for (const ResolvedOutput& o : outputs) {
        if (o.kind == ScriptKind::OpReturn) total += o.value;
    }
    return total;
}

bool ResolvedTransaction::has_op_return() const
{
    return std::any_of(outputs.begin(), outputs.end(), [](const ResolvedOutput& o) { return o.kind == ScriptKind::OpReturn; });
}

void LedgerIndex::apply_block(const Block& block)
{
    BlockInfo info;
    info.header = block.header;
    info.hash = block.header.hash();
    info.height = static_cast<uint32_t>(m_blocks.size());
    info.first_tx = m_txs.size();
    info.tx_count = block.transactions.size();
    if (!merkle_root_matches(block)) ++m_merkle_mismatches;

    for (const Transaction& tx : block.transactions) {
        IndexedTx itx;
        itx.id = txid(tx);
        itx.tx = tx;
        itx.height = info.height;
        itx.time = block.header.time;

        std::set<std::string> in_addrs;
        if (!tx.is_coinbase()) {
            for (uint32_t i = 0; i < tx.inputs.size(); ++i) {
                const OutPoint& prev = tx.inputs[i].previous;
                ++m_inputs;
                m_spenders[prev] = itx.id;
                const auto it = m_outputs.find(prev);
                if (it == m_outputs.end()) {
                    m_missing.push_back(MissingPrevout{itx.id, i, prev});
                } else if (it->second.address) {
                    in_addrs.insert(*it->second.address);
                }
            }
        }
        std::set<std::string> out_addrs;
        for (uint32_t v = 0; v < tx.outputs.size(); ++v) {
            const TxOutput& out = tx.outputs[v];
            const ScriptClass cls = classify_script(out.script_pubkey);
            IndexedOutput io;
            io.value = out.value;
            io.kind = cls.kind;
            if (const auto addr = derive_address(cls, m_network)) {
                io.address = addr->encoded;
                out_addrs.insert(addr->encoded);
            }
            if (cls.kind == ScriptKind::OpReturn) ++m_op_returns;
            m_outputs[OutPoint{itx.id, v}] = std::move(io);
        }
        for (const std::string& a : in_addrs) add_history(m_history[a], itx.id, Role::Input, itx.time);
        for (const std::string& a : out_addrs) add_history(m_history[a], itx.id, Role::Output, itx.time);

        m_tx_pos[itx.id] = m_txs.size();
        m_txs.push_back(std::move(itx));
    }
    m_blocks.push_back(info);
}

IngestionReport LedgerIndex::report() const
{
    IngestionReport r;
    r.blocks = m_blocks.size();
    r.transactions = m_txs.size();
    r.inputs = m_inputs;
    r.outputs = m_outputs.size();
    r.op_return_outputs = m_op_returns;
    r.missing_prevouts = m_missing.size();
    r.merkle_mismatches = m_merkle_mismatches;
    return r;
}

const IndexedTx* LedgerIndex::find(const TxId& id) const
{
    const auto it = m_tx_pos.find(id);
    return it == m_tx_pos.end() ? nullptr : &m_txs[it->second];
}

const IndexedOutput* LedgerIndex::output(const OutPoint& op) const
{
    const auto it = m_outputs.find(op);
    return it == m_outputs.end() ? nullptr : &it->second;
}

std::optional<TxId> LedgerIndex::spender(const OutPoint& op) const
{
    const auto it = m_spenders.find(op);
    if (it == m_spenders.end()) return std::nullopt;
    return it->second;
}

ResolvedTransaction LedgerIndex::resolve(const TxId& id) const
{
    const IndexedTx* itx = find(id);
    if (!itx) fail(Errc::UnknownTx, "transaction not indexed: " + id.display());
    return resolve(*itx);
}

ResolvedTransaction LedgerIndex::resolve(const IndexedTx& itx) const
{
    ResolvedTransaction r;
    r.txid = itx.id;
    r.time = itx.time;
    r.height = itx.height;
    r.coinbase = itx.tx.is_coinbase();

    for (uint32_t v = 0; v < itx.tx.outputs.size(); ++v) {
        const IndexedOutput& io = m_outputs.at(OutPoint{itx.id, v});
        ResolvedOutput ro;
        ro.vout = v;
        ro.value = io.value;
        ro.address = io.address;
        ro.kind = io.kind;
        if (io.kind == ScriptKind::OpReturn) {
            const ScriptClass cls = classify_script(itx.tx.outputs[v].script_pubkey);
            ro.op_return_payload = cls.payload;
            ro.op_return_standard = cls.standard;
        }
        r.outputs.push_back(std::move(ro));
    }

    if (r.coinbase) {
        ResolvedInput ri;
        ri.previous = itx.tx.inputs[0].previous;
        ri.coinbase = true;
        // subsidy plus collected fees
        ri.value = r.output_total();
        r.inputs.push_back(ri);
        r.fee = Amount(0);
        return r;
    }

    bool complete = true;
    Amount in_total;
    for (const TxInput& in : itx.tx.inputs) {
        ResolvedInput ri;
        ri.previous = in.previous;
        if (const IndexedOutput* prev = output(in.previous)) {
            ri.address = prev->address;
            ri.value = prev->value;
            in_total += prev->value;
        } else {
            complete = false;
        }
        r.inputs.push_back(std::move(ri));
    }
    if (complete) {
        const Amount out_total = r.output_total();
        // a negative fee means the data is inconsistent; report it as unknown
        if (in_total >= out_total) r.fee = in_total - out_total;
    }
    return r;
}

std::vector<ResolvedTransaction> LedgerIndex::resolve_all() const
{
    std::vector<ResolvedTransaction> out;
    out.reserve(m_txs.size());
    for (const IndexedTx& itx : m_txs) out.push_back(resolve(itx));
    return out;
}

std::vector<HistoryEntry> LedgerIndex::history(const std::string& address) const
{
    const auto it = m_history.find(address);
    if (it == m_history.end()) return {};
    std::vector<HistoryEntry> out = it->second;
    std::stable_sort(out.begin(), out.end(), [](const HistoryEntry& a, const HistoryEntry& b) { return a.time < b.time; });
    return out;
}

std::vector<std::string> LedgerIndex::addresses() const
{
    std::vector<std::string> out;
    out.reserve(m_history.size());
    for (const auto& [addr, _] : m_history) out.push_back(addr);
    std::sort(out.begin(), out.end());
    return out;
}

Bytes LedgerIndex::snapshot() const
{
    ByteWriter w;
    w.bytes(SNAPSHOT_MAGIC);
    w.u32(SNAPSHOT_VERSION);
    w.u8(static_cast<uint8_t>(m_network));
    w.u32(static_cast<uint32_t>(m_blocks.size()));
    w.u64(m_txs.size());
    for (const BlockInfo& b : m_blocks) {
        w.bytes(serialize_header(b.header));
        w.varint(b.tx_count);
        for (size_t i = 0; i < b.tx_count; ++i) {
            const Bytes raw = serialize_transaction(m_txs[b.first_tx + i].tx);
            w.var_bytes(raw);
        }
    }
    return std::move(w).take();
}

LedgerIndex LedgerIndex::from_snapshot(ByteSpan bytes)
{
    try {
        ByteReader r(bytes);
        ByteSpan magic = r.take(SNAPSHOT_MAGIC.size());
        if (!std::equal(magic.begin(), magic.end(), SNAPSHOT_MAGIC.begin())) fail(Errc::BadSnapshot, "not an index snapshot");
        const uint32_t version = r.u32();
        if (version != SNAPSHOT_VERSION) fail(Errc::BadSnapshot, "unsupported snapshot version " + std::to_string(version));
        const uint8_t net = r.u8();
        if (net > static_cast<uint8_t>(Network::Regtest)) fail(Errc::BadSnapshot, "bad network tag");
        LedgerIndex index(static_cast<Network>(net));
        const uint32_t n_blocks = r.u32();
        const uint64_t n_txs = r.u64();
        for (uint32_t b = 0; b < n_blocks; ++b) {
            ByteSpan header_bytes = r.take(80);
            Bytes framed(header_bytes.begin(), header_bytes.end());
            const uint64_t count = r.varint();
            ByteWriter body;
            body.bytes(framed);
            body.varint(count);
            for (uint64_t i = 0; i < count; ++i) {
                const uint64_t len = r.varint();
                body.bytes(r.take(static_cast<size_t>(len)));
            }
            index.apply_block(parse_block(body.data()));
        }
        if (!r.empty()) fail(Errc::BadSnapshot, "trailing bytes in snapshot");
        if (index.m_txs.size() != n_txs) fail(Errc::BadSnapshot, "transaction count mismatch");
        return index;
    } catch (const Error& e) {
        if (e.code() == Errc::BadSnapshot) throw;
        fail(Errc::BadSnapshot, std::string("corrupt snapshot: ") + e.what());
    }
}

void LedgerIndex::export_outputs_csv(std::ostream& out) const
{
    std::map<std::pair<std::string, uint32_t>, const IndexedOutput*> sorted;
    for (const auto& [op, io] : m_outputs) sorted.emplace(std::make_pair(op.txid.display(), op.vout), &io);
    out << SCHEMA_LINE << "txid,vout,value_sat,address,script_class\n";
    for (const auto& [key, io] : sorted) {
        out << key.first << ',' << key.second << ',' << io->value.sat() << ',' << io->address.value_or("") << ','
            << script_kind_name(io->kind) << '\n';
    }
}

LedgerIndex build_index(const std::vector<Block>& blocks, Network net)
{
    LedgerIndex index(net);
    for (const Block& b : blocks) index.apply_block(b);
    return index;
}

ResolvedTransaction resolve_transaction(const LedgerIndex& index, const TxId& id)
{
    return index.resolve(id);
}

std::vector<HistoryEntry> address_history(const LedgerIndex& index, const std::string& address)
{
    return index.history(address);
}

std::vector<Block> order_chain(std::vector<Block> blocks)
{
    std::map<Hash256, size_t> by_hash;
    for (size_t i = 0; i < blocks.size(); ++i) by_hash.emplace(blocks[i].header.hash(), i);
    std::vector<std::vector<size_t>> children(blocks.size());
    std::vector<size_t> roots;
    for (size_t i = 0; i < blocks.size(); ++i) {
        const auto it = by_hash.find(blocks[i].header.prev_hash);
        if (it == by_hash.end() || it->second == i) {
            roots.push_back(i);
        } else {
            children[it->second].push_back(i);
        }
    }
    std::vector<size_t> order;
    order.reserve(blocks.size());
    std::vector<bool> seen(blocks.size(), false);
    for (size_t root : roots) {
        std::vector<size_t> stack = {root};
        while (!stack.empty()) {
            const size_t cur = stack.back();
            stack.pop_back();
            if (seen[cur]) continue;
            seen[cur] = true;
            order.push_back(cur);
            for (auto it = children[cur].rbegin(); it != children[cur].rend(); ++it) stack.push_back(*it);
        }
    }
    // duplicates of an already-seen hash end up here
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (!seen[i]) order.push_back(i);
    }
    std::vector<Block> out;
    out.reserve(blocks.size());
    for (size_t i : order) out.push_back(std::move(blocks[i]));
    return out;
}

} // namespace burnscope
