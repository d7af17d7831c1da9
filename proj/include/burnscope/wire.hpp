// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_WIRE_HPP
#define BURNSCOPE_WIRE_HPP

#include <burnscope/amount.hpp>
#include <burnscope/hash.hpp>
#include <burnscope/util.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <utility>
#include <vector>

namespace burnscope {

/** Largest block payload accepted from a framed block file. */
inline constexpr uint32_t MAX_BLOCK_PAYLOAD = 8 * 1024 * 1024;

enum class Network { Mainnet, Testnet, Regtest };

using NetworkMagic = std::array<uint8_t, 4>;
NetworkMagic network_magic(Network net);
std::string_view network_name(Network net);
std::optional<Network> parse_network(std::string_view name);

struct OutPoint {
    TxId txid;
    uint32_t vout{0};

    static OutPoint coinbase() { return OutPoint{TxId{}, 0xFFFFFFFF}; }
    bool is_coinbase_sentinel() const { return vout == 0xFFFFFFFF && txid.is_null(); }
    /** "txid:vout" */
    std::string str() const;
    /** Parses "txid:vout"; throws Error(BadConfig) on malformed text. */
    static OutPoint parse(std::string_view text);

    friend auto operator<=>(const OutPoint&, const OutPoint&) = default;
};

struct TxInput {
    OutPoint previous;
    Bytes script_sig;
    uint32_t sequence{0xFFFFFFFF};
    std::vector<Bytes> witness;

    friend bool operator==(const TxInput&, const TxInput&) = default;
};

struct TxOutput {
    Amount value;
    Bytes script_pubkey;

    friend bool operator==(const TxOutput&, const TxOutput&) = default;
};

struct Transaction {
    int32_t version{1};
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    uint32_t locktime{0};

    /** True iff any input carries witness items; selects the BIP144 encoding. */
    bool has_witness() const;
    bool is_coinbase() const { return inputs.size() == 1 && inputs[0].previous.is_coinbase_sentinel(); }

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct BlockHeader {
    int32_t version{1};
    Hash256 prev_hash{};
    Hash256 merkle_root{};
    uint32_t time{0};
    uint32_t bits{0};
    uint32_t nonce{0};

    Hash256 hash() const;
    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;

    friend bool operator==(const Block&, const Block&) = default;
};

/** Bounds-checked little-endian cursor over a byte span. */
class ByteReader
{
public:
    explicit ByteReader(ByteSpan data, size_t offset = 0) : m_data(data), m_pos(offset) {}

    size_t position() const { return m_pos; }
    size_t remaining() const { return m_data.size() - m_pos; }
    bool empty() const { return m_pos >= m_data.size(); }

    uint8_t u8();
    uint16_t u16();
    uint32_t u32();
    uint64_t u64();
    uint64_t varint();
    ByteSpan take(size_t n);
    Bytes bytes(size_t n);
    uint8_t peek() const;

private:
    void need(size_t n) const;

    ByteSpan m_data;
    size_t m_pos;
};

class ByteWriter
{
public:
    void u8(uint8_t v) { m_out.push_back(v); }
    void u16(uint16_t v);
    void u32(uint32_t v);
    void u64(uint64_t v);
    void varint(uint64_t v);
    void bytes(ByteSpan b) { m_out.insert(m_out.end(), b.begin(), b.end()); }
    /** varint length prefix followed by the bytes */
    void var_bytes(ByteSpan b);

    const Bytes& data() const& { return m_out; }
    Bytes take() && { return std::move(m_out); }

private:
    Bytes m_out;
};

/**
 * Decodes a CompactSize integer at offset. Returns (value, next offset).
 * Throws Truncated, or NonMinimal when a wider form encodes a value that
 * fits a narrower one.
 */
std::pair<uint64_t, size_t> read_varint(ByteSpan bytes, size_t offset);
Bytes encode_varint(uint64_t value);

/** Decodes exactly one transaction; the whole span must be consumed. */
Transaction parse_transaction(ByteSpan bytes);
/** Decodes one transaction starting at the reader's position. */
Transaction read_transaction(ByteReader& reader);
void write_transaction(ByteWriter& w, const Transaction& tx, bool include_witness);

/** Witness serialization when tx.has_witness(), legacy otherwise. */
Bytes serialize_transaction(const Transaction& tx);
/** Legacy (witness-stripped) serialization, the txid preimage. */
Bytes serialize_transaction_legacy(const Transaction& tx);

TxId txid(const Transaction& tx);
/** Hash of the full serialization; equals txid for legacy transactions. */
Hash256 wtxid(const Transaction& tx);

Block parse_block(ByteSpan payload);
Bytes serialize_block(const Block& block);
Bytes serialize_header(const BlockHeader& header);

/** Merkle root over the block's txids (duplicate-last rule for odd levels). */
Hash256 compute_merkle_root(const std::vector<Transaction>& txs);
bool merkle_root_matches(const Block& block);

/** Frames a block payload with magic and length for a blk*.dat file. */
Bytes frame_block(Network net, const Block& block);

/**
 * Incremental parser for blk*.dat byte streams. Feed arbitrary chunks;
 * completed blocks are delivered in file order to the callback. Runs of
 * zero bytes between records are skipped.
 */
class BlockStreamParser
{
public:
    using Sink = std::function<void(Block&&)>;

    BlockStreamParser(Network net, Sink sink);

    void feed(ByteSpan chunk);
    /** Throws Truncated if a record is incomplete at end of stream. */
    void finish();

    size_t blocks_emitted() const { return m_emitted; }

private:
    void drain();

    NetworkMagic m_magic;
    Sink m_sink;
    Bytes m_buffer;
    size_t m_consumed{0};
    size_t m_emitted{0};
};

std::vector<Block> parse_block_file(std::istream& stream, Network net = Network::Mainnet);
std::vector<Block> parse_block_file(ByteSpan bytes, Network net = Network::Mainnet);

} // namespace burnscope

template <>
struct std::hash<burnscope::OutPoint> {
    size_t operator()(const burnscope::OutPoint& op) const noexcept
    {
        return std::hash<burnscope::TxId>{}(op.txid) ^ (static_cast<size_t>(op.vout) * 0x9E3779B97F4A7C15ULL);
    }
};

#endif // BURNSCOPE_WIRE_HPP
