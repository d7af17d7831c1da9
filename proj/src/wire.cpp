// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/error.hpp>
#include <burnscope/wire.hpp>

#include <algorithm>
#include <charconv>

namespace burnscope {

NetworkMagic network_magic(Network net)
{
    switch (net) {
    case Network::Mainnet: return {0xF9, 0xBE, 0xB4, 0xD9};
    case Network::Testnet: return {0x0B, 0x11, 0x09, 0x07};
    case Network::Regtest: return {0xFA, 0xBF, 0xB5, 0xDA};
    }
    return {};
}

std::string_view network_name(Network net)
{
    switch (net) {
    case Network::Mainnet: return "mainnet";
    case Network::Testnet: return "testnet";
    case Network::Regtest: return "regtest";
    }
    return "unknown";
}

std::optional<Network> parse_network(std::string_view name)
{
    if (name == "mainnet" || name == "main") return Network::Mainnet;
    if (name == "testnet" || name == "test") return Network::Testnet;
    if (name == "regtest") return Network::Regtest;
    return std::nullopt;
}

std::string OutPoint::str() const
{
    return txid.display() + ":" + std::to_string(vout);
}

OutPoint OutPoint::parse(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) fail(Errc::BadConfig, "outpoint must be txid:vout");
    OutPoint op;
    op.txid = TxId::from_display(text.substr(0, colon));
    const std::string_view v = text.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), op.vout);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail(Errc::BadConfig, "bad vout in outpoint");
    return op;
}

bool Transaction::has_witness() const
{
    return std::any_of(inputs.begin(), inputs.end(), [](const TxInput& in) { return !in.witness.empty(); });
}

Hash256 BlockHeader::hash() const
{
    return sha256d(serialize_header(*this));
}

// ByteReader

void ByteReader::need(size_t n) const
{
    if (n > remaining()) {
        fail(Errc::Truncated, "need " + std::to_string(n) + " bytes at offset " + std::to_string(m_pos) +
                                  ", have " + std::to_string(remaining()));
    }
}

uint8_t ByteReader::u8()
{
    need(1);
    return m_data[m_pos++];
}

uint8_t ByteReader::peek() const
{
    need(1);
    return m_data[m_pos];
}

uint16_t ByteReader::u16()
{
    need(2);
    const uint16_t v = static_cast<uint16_t>(m_data[m_pos] | (m_data[m_pos + 1] << 8));
    m_pos += 2;
    return v;
}

uint32_t ByteReader::u32()
{
    need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | m_data[m_pos + i];
    m_pos += 4;
    return v;
}

uint64_t ByteReader::u64()
{
    need(8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | m_data[m_pos + i];
    m_pos += 8;
    return v;
}

uint64_t ByteReader::varint()
{
    const auto [value, next] = read_varint(m_data, m_pos);
    m_pos = next;
    return value;
}

ByteSpan ByteReader::take(size_t n)
{
    need(n);
    ByteSpan s = m_data.subspan(m_pos, n);
    m_pos += n;
    return s;
}

Bytes ByteReader::bytes(size_t n)
{
    ByteSpan s = take(n);
    return Bytes(s.begin(), s.end());
}

// ByteWriter

void ByteWriter::u16(uint16_t v)
{
    m_out.push_back(static_cast<uint8_t>(v));
    m_out.push_back(static_cast<uint8_t>(v >> 8));
}

void ByteWriter::u32(uint32_t v)
{
    for (int i = 0; i < 4; ++i) m_out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(uint64_t v)
{
    for (int i = 0; i < 8; ++i) m_out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::varint(uint64_t v)
{
    const Bytes enc = encode_varint(v);
    bytes(enc);
}

void ByteWriter::var_bytes(ByteSpan b)
{
    varint(b.size());
    bytes(b);
}

// CompactSize

std::pair<uint64_t, size_t> read_varint(ByteSpan bytes, size_t offset)
{
    if (offset >= bytes.size()) fail(Errc::Truncated, "varint at end of input");
    const uint8_t prefix = bytes[offset];
    size_t width = 0;
    uint64_t min = 0;
    switch (prefix) {
    case 0xfd: width = 2; min = 0xfd; break;
    case 0xfe: width = 4; min = 0x10000; break;
    case 0xff: width = 8; min = 0x100000000ULL; break;
    default: return {prefix, offset + 1};
    }
    if (bytes.size() - offset - 1 < width) fail(Errc::Truncated, "varint payload truncated");
    uint64_t v = 0;
    for (size_t i = width; i > 0; --i) v = (v << 8) | bytes[offset + i];
    if (v < min) fail(Errc::NonMinimal, "non-minimal CompactSize encoding of " + std::to_string(v));
    return {v, offset + 1 + width};
}

Bytes encode_varint(uint64_t value)
{
    Bytes out;
    if (value < 0xfd) {
        out.push_back(static_cast<uint8_t>(value));
        return out;
    }
    size_t width;
    if (value <= 0xffff) {
        out.push_back(0xfd);
        width = 2;
    } else if (value <= 0xffffffffULL) {
        out.push_back(0xfe);
        width = 4;
    } else {
        out.push_back(0xff);
        width = 8;
    }
    for (size_t i = 0; i < width; ++i) out.push_back(static_cast<uint8_t>(value >> (8 * i)));
    return out;
}

// Transactions

static size_t read_count(ByteReader& r, size_t min_item_size)
{
    const uint64_t n = r.varint();
    if (min_item_size > 0 && n > r.remaining() / min_item_size) {
        fail(Errc::Truncated, "element count " + std::to_string(n) + " exceeds remaining bytes");
    }
    return static_cast<size_t>(n);
}

static Bytes read_var_bytes(ByteReader& r)
{
    const size_t n = read_count(r, 1);
    return r.bytes(n);
}

static void read_inputs(ByteReader& r, std::vector<TxInput>& inputs, size_t count)
{
    inputs.resize(count);
    for (TxInput& in : inputs) {
        ByteSpan h = r.take(32);
        Hash256 raw;
        std::copy(h.begin(), h.end(), raw.begin());
        in.previous.txid = TxId(raw);
        in.previous.vout = r.u32();
        in.script_sig = read_var_bytes(r);
        in.sequence = r.u32();
    }
}

static void read_outputs(ByteReader& r, std::vector<TxOutput>& outputs)
{
    // 8-byte value plus at least a one-byte script length
    const size_t count = read_count(r, 9);
    outputs.resize(count);
    for (TxOutput& out : outputs) {
        out.value = Amount(r.u64());
        out.script_pubkey = read_var_bytes(r);
    }
}

Transaction read_transaction(ByteReader& r)
{
    Transaction tx;
    tx.version = static_cast<int32_t>(r.u32());
    // 36-byte outpoint, script length, 4-byte sequence
    size_t n_in = read_count(r, 41);
    bool witness = false;
    if (n_in == 0) {
        const uint8_t flags = r.u8();
        if (flags != 0x01) fail(Errc::MalformedTx, "unknown transaction flag byte " + std::to_string(flags));
        witness = true;
        n_in = read_count(r, 41);
    }
    read_inputs(r, tx.inputs, n_in);
    read_outputs(r, tx.outputs);
    if (witness) {
        for (TxInput& in : tx.inputs) {
            const size_t items = read_count(r, 1);
            in.witness.reserve(items);
            for (size_t i = 0; i < items; ++i) in.witness.push_back(read_var_bytes(r));
        }
        if (!tx.has_witness()) fail(Errc::SuperfluousWitness, "witness flag set but all witnesses empty");
    }
    tx.locktime = r.u32();
    if (tx.inputs.empty()) fail(Errc::MalformedTx, "transaction has no inputs");
    if (tx.outputs.empty()) fail(Errc::MalformedTx, "transaction has no outputs");
    return tx;
}

Transaction parse_transaction(ByteSpan bytes)
{
    ByteReader r(bytes);
    Transaction tx = read_transaction(r);
    if (!r.empty()) fail(Errc::TrailingBytes, std::to_string(r.remaining()) + " bytes after transaction");
    return tx;
}

void write_transaction(ByteWriter& w, const Transaction& tx, bool include_witness)
{
    const bool witness = include_witness && tx.has_witness();
    w.u32(static_cast<uint32_t>(tx.version));
    if (witness) {
        w.u8(0x00);
        w.u8(0x01);
    }
    w.varint(tx.inputs.size());
    for (const TxInput& in : tx.inputs) {
        w.bytes(in.previous.txid.raw());
        w.u32(in.previous.vout);
        w.var_bytes(in.script_sig);
        w.u32(in.sequence);
    }
    w.varint(tx.outputs.size());
    for (const TxOutput& out : tx.outputs) {
        w.u64(out.value.sat());
        w.var_bytes(out.script_pubkey);
    }
    if (witness) {
        for (const TxInput& in : tx.inputs) {
            w.varint(in.witness.size());
            for (const Bytes& item : in.witness) w.var_bytes(item);
        }
    }
    w.u32(tx.locktime);
}

Bytes serialize_transaction(const Transaction& tx)
{
    ByteWriter w;
    write_transaction(w, tx, true);
    return std::move(w).take();
}

Bytes serialize_transaction_legacy(const Transaction& tx)
{
    ByteWriter w;
    write_transaction(w, tx, false);
    return std::move(w).take();
}

TxId txid(const Transaction& tx)
{
    return TxId(sha256d(serialize_transaction_legacy(tx)));
}

Hash256 wtxid(const Transaction& tx)
{
    return sha256d(serialize_transaction(tx));
}

// Blocks

static BlockHeader read_header(ByteReader& r)
{
    BlockHeader h;
    h.version = static_cast<int32_t>(r.u32());
    ByteSpan prev = r.take(32);
    std::copy(prev.begin(), prev.end(), h.prev_hash.begin());
    ByteSpan merkle = r.take(32);
    std::copy(merkle.begin(), merkle.end(), h.merkle_root.begin());
    h.time = r.u32();
    h.bits = r.u32();
    h.nonce = r.u32();
    return h;
}

Bytes serialize_header(const BlockHeader& h)
{
    ByteWriter w;
    w.u32(static_cast<uint32_t>(h.version));
    w.bytes(h.prev_hash);
    w.bytes(h.merkle_root);
    w.u32(h.time);
    w.u32(h.bits);
    w.u32(h.nonce);
    return std::move(w).take();
}

Block parse_block(ByteSpan payload)
{
    ByteReader r(payload);
    Block block;
    block.header = read_header(r);
    // the smallest legal transaction is 60 bytes
    const size_t n = read_count(r, 60);
    block.transactions.reserve(n);
    for (size_t i = 0; i < n; ++i) block.transactions.push_back(read_transaction(r));
    if (!r.empty()) {
        fail(Errc::LengthMismatch, "block payload has " + std::to_string(r.remaining()) + " unparsed bytes");
    }
    return block;
}

Bytes serialize_block(const Block& block)
{
    ByteWriter w;
    w.bytes(serialize_header(block.header));
    w.varint(block.transactions.size());
    for (const Transaction& tx : block.transactions) write_transaction(w, tx, true);
    return std::move(w).take();
}

Hash256 compute_merkle_root(const std::vector<Transaction>& txs)
{
    if (txs.empty()) return Hash256{};
    std::vector<Hash256> level;
    level.reserve(txs.size());
    for (const Transaction& tx : txs) level.push_back(txid(tx).raw());
    while (level.size() > 1) {
        if (level.size() % 2 != 0) level.push_back(level.back());
        std::vector<Hash256> next;
        next.reserve(level.size() / 2);
        for (size_t i = 0; i < level.size(); i += 2) {
            std::array<uint8_t, 64> cat;
            std::copy(level[i].begin(), level[i].end(), cat.begin());
            std::copy(level[i + 1].begin(), level[i + 1].end(), cat.begin() + 32);
            next.push_back(sha256d(cat));
        }
        level = std::move(next);
    }
    return level.front();
}

bool merkle_root_matches(const Block& block)
{
    return compute_merkle_root(block.transactions) == block.header.merkle_root;
}

Bytes frame_block(Network net, const Block& block)
{
    const Bytes payload = serialize_block(block);
    ByteWriter w;
    w.bytes(network_magic(net));
    w.u32(static_cast<uint32_t>(payload.size()));
    w.bytes(payload);
    return std::move(w).take();
}

// Block files

BlockStreamParser::BlockStreamParser(Network net, Sink sink) : m_magic(network_magic(net)), m_sink(std::move(sink)) {}

void BlockStreamParser::feed(ByteSpan chunk)
{
    m_buffer.insert(m_buffer.end(), chunk.begin(), chunk.end());
    drain();
}

void BlockStreamParser::drain()
{
    size_t pos = 0;
    for (;;) {
        while (pos < m_buffer.size() && m_buffer[pos] == 0x00) ++pos;
        if (m_buffer.size() - pos < 4) break;
        if (!std::equal(m_magic.begin(), m_magic.end(), m_buffer.begin() + static_cast<std::ptrdiff_t>(pos))) {
            fail(Errc::BadMagic, "bad network magic at stream offset " + std::to_string(m_consumed + pos));
        }
        if (m_buffer.size() - pos < 8) break;
        ByteReader len_reader(ByteSpan(m_buffer).subspan(pos + 4, 4));
        const uint32_t len = len_reader.u32();
        if (len > MAX_BLOCK_PAYLOAD) {
            fail(Errc::LengthMismatch, "block payload length " + std::to_string(len) + " exceeds 8 MiB limit");
        }
        if (m_buffer.size() - pos - 8 < len) break;
        Block block = parse_block(ByteSpan(m_buffer).subspan(pos + 8, len));
        pos += 8 + len;
        ++m_emitted;
        m_sink(std::move(block));
    }
    m_buffer.erase(m_buffer.begin(), m_buffer.begin() + static_cast<std::ptrdiff_t>(pos));
    m_consumed += pos;
}

void BlockStreamParser::finish()
{
    if (std::any_of(m_buffer.begin(), m_buffer.end(), [](uint8_t b) { return b != 0; })) {
        fail(Errc::Truncated, "incomplete block record at stream offset " + std::to_string(m_consumed));
    }
    m_buffer.clear();
}

std::vector<Block> parse_block_file(std::istream& stream, Network net)
{
    std::vector<Block> blocks;
    BlockStreamParser parser(net, [&](Block&& b) { blocks.push_back(std::move(b)); });
    std::array<char, 1 << 16> buf;
    while (stream) {
        stream.read(buf.data(), buf.size());
        const auto got = stream.gcount();
        if (got <= 0) break;
        parser.feed(ByteSpan(reinterpret_cast<const uint8_t*>(buf.data()), static_cast<size_t>(got)));
    }
    parser.finish();
    return blocks;
}

std::vector<Block> parse_block_file(ByteSpan bytes, Network net)
{
    std::vector<Block> blocks;
    BlockStreamParser parser(net, [&](Block&& b) { blocks.push_back(std::move(b)); });
    parser.feed(bytes);
    parser.finish();
    return blocks;
}

} // namespace burnscope
