// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_TEST_UTIL_HPP
#define BURNSCOPE_TEST_UTIL_HPP

#include <burnscope/address.hpp>
#include <burnscope/hash.hpp>
#include <burnscope/ledger.hpp>
#include <burnscope/script.hpp>
#include <burnscope/util.hpp>
#include <burnscope/wire.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace burnscope::test {

inline std::filesystem::path fixture_dir()
{
    return std::filesystem::path(BURNSCOPE_SOURCE_DIR) / "tests" / "fixtures";
}

inline Bytes fixture_hex(const std::string& name)
{
    return hex_decode(std::string(trim(read_text_file(fixture_dir() / name))));
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("burnscope-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Hash160 key(const std::string& tag)
{
    return hash160(to_bytes(tag));
}

inline Bytes p2pkh(const std::string& tag)
{
    return p2pkh_script(key(tag));
}

inline std::string addr(const std::string& tag, Network net = Network::Regtest)
{
    return p2pkh_address(key(tag), net);
}

inline Transaction coinbase(uint32_t height, Amount value, const Bytes& script)
{
    Transaction tx;
    TxInput in;
    in.previous = OutPoint::coinbase();
    in.script_sig = {0x03, static_cast<uint8_t>(height), static_cast<uint8_t>(height >> 8), 0x00};
    tx.inputs.push_back(in);
    tx.outputs.push_back(TxOutput{value, script});
    return tx;
}

inline Transaction spend(const std::vector<OutPoint>& prevs, const std::vector<TxOutput>& outs)
{
    Transaction tx;
    for (const OutPoint& p : prevs) {
        TxInput in;
        in.previous = p;
        in.script_sig = {0x01, 0x00};
        tx.inputs.push_back(in);
    }
    tx.outputs = outs;
    return tx;
}

/** Chains blocks holding the given transactions, one second apart from time. */
class ChainBuilder
{
public:
    explicit ChainBuilder(uint32_t time = 1644652800) : m_time(time) {}

    Block& add(std::vector<Transaction> txs)
    {
        Block b;
        b.header.prev_hash = m_blocks.empty() ? Hash256{} : m_blocks.back().header.hash();
        b.header.time = m_time;
        b.header.bits = 0x207fffff;
        b.header.nonce = static_cast<uint32_t>(m_blocks.size());
        m_time += 600;
        txs.insert(txs.begin(), coinbase(static_cast<uint32_t>(m_blocks.size()), Amount(50 * COIN), p2pkh("miner")));
        b.transactions = std::move(txs);
        b.header.merkle_root = compute_merkle_root(b.transactions);
        m_blocks.push_back(std::move(b));
        return m_blocks.back();
    }

    void set_time(uint32_t t) { m_time = t; }
    const std::vector<Block>& blocks() const { return m_blocks; }
    LedgerIndex index() const { return build_index(m_blocks, Network::Regtest); }

private:
    uint32_t m_time;
    std::vector<Block> m_blocks;
};

} // namespace burnscope::test

#endif // BURNSCOPE_TEST_UTIL_HPP
