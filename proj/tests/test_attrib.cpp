// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "test_util.hpp"

#include <burnscope/attrib.hpp>
#include <burnscope/error.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace burnscope;
using namespace burnscope::test;

namespace {

ResolvedTransaction rtx(const std::string& tag, const std::vector<std::string>& ins,
                        const std::vector<std::pair<std::string, uint64_t>>& outs, const std::string& memo = "",
                        uint32_t time = 1000)
{
    ResolvedTransaction t;
    t.txid = TxId(sha256(to_bytes(tag)));
    t.time = time;
    for (size_t i = 0; i < ins.size(); ++i) {
        ResolvedInput in;
        in.previous = OutPoint{TxId(sha256(to_bytes(tag + "-prev"))), static_cast<uint32_t>(i)};
        in.address = ins[i];
        in.value = Amount(100000);
        t.inputs.push_back(in);
    }
    uint32_t v = 0;
    if (!memo.empty()) {
        ResolvedOutput o;
        o.vout = v++;
        o.kind = ScriptKind::OpReturn;
        o.op_return_payload = to_bytes(memo);
        o.op_return_standard = true;
        o.value = Amount(10);
        t.outputs.push_back(o);
    }
    for (const auto& [a, sat] : outs) {
        ResolvedOutput o;
        o.vout = v++;
        o.kind = ScriptKind::P2PKH;
        o.address = a;
        o.value = Amount(sat);
        t.outputs.push_back(o);
    }
    return t;
}

CalloutText text(const std::string& s)
{
    return decode_payload_text(to_bytes(s));
}

EntityLabel label(Entity e, uint32_t t = 0, LabelSource s = LabelSource::ExternalFile)
{
    return EntityLabel{e, s, t};
}

} // namespace

TEST(LabelTable, FirstSeenWinsAndConflictsAreKept)
{
    LabelTable t;
    EXPECT_TRUE(t.assign("a", label(Entity::GRU, 50)));
    EXPECT_TRUE(t.assign("a", label(Entity::GRU, 20)));
    EXPECT_EQ(t.find("a")->first_seen, 20u);
    const TxId id(sha256(to_bytes("x")));
    EXPECT_FALSE(t.assign("a", label(Entity::SVR, 10), id));
    EXPECT_EQ(t.entity_of("a"), Entity::GRU);
    ASSERT_EQ(t.conflicts().size(), 1u);
    EXPECT_EQ(t.conflicts()[0].kept.entity, Entity::GRU);
    EXPECT_EQ(t.conflicts()[0].rejected.entity, Entity::SVR);
    EXPECT_EQ(t.conflicts()[0].txid, id);
    EXPECT_FALSE(t.entity_of("b"));
}

TEST(Labels, LoadAndExport)
{
    const std::string a1 = addr("g1");
    const std::string a2 = p2wpkh_address(key("s1"), Network::Regtest);
    std::istringstream in("# feed\naddress,label,source\n" + a1 + ",GRU,external-file\n\n" + a2 + ",SVR,callout\n");
    const LabelTable t = load_labels(in);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t.entity_of(a1), Entity::GRU);
    EXPECT_EQ(t.find(a2)->source, LabelSource::Callout);
    std::ostringstream out;
    export_labels(t, out);
    EXPECT_EQ(out.str().rfind("# schema_version: 1\naddress,label,source\n", 0), 0u);
    std::istringstream again(out.str());
    EXPECT_EQ(load_labels(again).entries(), t.entries());
}

TEST(Labels, LoadRejectsBadRows)
{
    const auto code = [](const std::string& body) {
        std::istringstream in(body);
        try {
            load_labels(in);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::Io;
    };
    const std::string good = addr("g");
    EXPECT_EQ(code("addr,label\n"), Errc::BadConfig);
    EXPECT_EQ(code("address,label,source\n1AVNM68gj6PGPFcJuftKATa4WLnzg8fpfw,GRU,callout\n"), Errc::BadAddress);
    EXPECT_EQ(code("address,label,source\n" + good + ",NSA,callout\n"), Errc::BadLabel);
    EXPECT_EQ(code("address,label,source\n" + good + ",gru,callout\n"), Errc::BadLabel);
    EXPECT_EQ(code("address,label,source\n" + good + ",GRU,rumour\n"), Errc::BadLabel);
}

TEST(Registry, DefaultsAndExactMatch)
{
    const MessageRegistry r = MessageRegistry::defaults();
    ASSERT_EQ(r.messages().size(), 4u);
    const auto c = match_callout(text("GRU to SVR"), r);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->message_id, "gru-to-svr");
    EXPECT_EQ(c->sender, Entity::GRU);
    EXPECT_EQ(c->receiver, Entity::SVR);
    EXPECT_FALSE(c->fallback);
    const auto d = match_callout(text("Helping Ukraine with money from GRU hackers"), r);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->receiver, Entity::DONATION);
}

TEST(Registry, FallbackSplitsFirstSentence)
{
    const MessageRegistry r = MessageRegistry::defaults();
    const auto c = match_callout(text("gru to fsb. more words follow"), r);
    ASSERT_TRUE(c);
    EXPECT_TRUE(c->fallback);
    EXPECT_EQ(c->message_id, "gru-to-fsb");
    const auto u = match_callout(text("SVR to FSB!"), r);
    ASSERT_TRUE(u);
    EXPECT_EQ(u->message_id, "SVR to FSB");
    EXPECT_EQ(u->sender, Entity::SVR);
    EXPECT_FALSE(match_callout(text("Alice to Bob"), r));
    EXPECT_FALSE(match_callout(text("GRU and SVR"), r));
    EXPECT_FALSE(match_callout(decode_payload_text(Bytes{0xff, 0xfe}), r));
}

TEST(Registry, VariantsAliasesAndSeparators)
{
    MessageRegistry r = MessageRegistry::defaults();
    RegistryMessage m{"svr-to-gru", "SVR to GRU", {"\xd0\xa1\xd0\x92\xd0\xa0 \xd0\x93\xd0\xa0\xd0\xa3"}, Entity::SVR,
                      Entity::GRU};
    r.add_message(m);
    const auto c = match_callout(text("\xd0\xa1\xd0\x92\xd0\xa0 \xd0\x93\xd0\xa0\xd0\xa3"), r);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->message_id, "svr-to-gru");
    r.add_alias("Unit26165", Entity::GRU);
    r.set_separators({" to ", " -> "});
    const auto a = match_callout(text("unit26165 -> SVR"), r);
    ASSERT_TRUE(a);
    EXPECT_EQ(a->message_id, "gru-to-svr");
    EXPECT_THROW(r.add_message(m), Error);
}

TEST(Registry, JsonRoundTripAndErrors)
{
    MessageRegistry r = MessageRegistry::defaults();
    r.add_alias("sandworm", Entity::GRU);
    const MessageRegistry back = MessageRegistry::from_json(r.to_json());
    EXPECT_EQ(back.to_json(), r.to_json());
    EXPECT_EQ(back.resolve_entity("SANDWORM"), Entity::GRU);
    for (const char* bad : {"{", "{}", R"({"messages":[{"id":"x","text":"y","sender":"NSA","receiver":"GRU"}]})",
                            R"({"messages":[{"id":"x","sender":"GRU","receiver":"GRU"}]})"}) {
        try {
            MessageRegistry::from_json(bad);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::BadConfig) << bad;
        }
    }
}

TEST(Propagation, ChangeAddressKeepsSenderEntity)
{
    const MessageRegistry reg = MessageRegistry::defaults();
    const auto tx = rtx("burn", {"A"}, {{"B", 547}, {"A", 9000}}, "GRU to SVR", 77);
    const LabelTable t = propagate_labels({tx}, reg);
    EXPECT_EQ(t.entity_of("A"), Entity::GRU);
    EXPECT_EQ(t.entity_of("B"), Entity::SVR);
    EXPECT_EQ(t.find("B")->source, LabelSource::Callout);
    EXPECT_EQ(t.find("B")->first_seen, 77u);
    EXPECT_TRUE(t.conflicts().empty());
}

TEST(Propagation, ConflictsAreReportedNotResolved)
{
    const MessageRegistry reg = MessageRegistry::defaults();
    LabelTable base;
    base.assign("B", label(Entity::FSB));
    const std::vector<ResolvedTransaction> txs = {rtx("t1", {"A"}, {{"B", 547}}, "GRU to SVR"),
                                                  rtx("t2", {"B"}, {{"C", 547}}, "GRU to FSB")};
    const LabelTable t = propagate_labels(txs, reg, base);
    EXPECT_EQ(t.entity_of("B"), Entity::FSB);
    ASSERT_EQ(t.conflicts().size(), 2u);
    EXPECT_EQ(t.conflicts()[0].rejected.entity, Entity::SVR);
    EXPECT_EQ(t.conflicts()[0].txid, txs[0].txid);
    EXPECT_EQ(t.conflicts()[1].rejected.entity, Entity::GRU);
    const LabelTable again = propagate_labels(txs, reg, base);
    EXPECT_EQ(again.entries(), t.entries());
    EXPECT_EQ(again.conflicts().size(), t.conflicts().size());
}

TEST(Propagation, NonCalloutsLabelNothing)
{
    const LabelTable t = propagate_labels({rtx("pay", {"A"}, {{"B", 547}})}, MessageRegistry::defaults());
    EXPECT_EQ(t.size(), 0u);
}

TEST(Cospend, MergesInputsTransitively)
{
    const std::vector<ResolvedTransaction> txs = {rtx("1", {"a", "b"}, {{"x", 1}}), rtx("2", {"b", "c"}, {{"y", 1}}),
                                                  rtx("3", {"d"}, {{"a", 1}})};
    const ClusterSet cs = cospend_clusters(txs, {}, {"lonely"});
    EXPECT_EQ(cs.cluster_of.at("a"), cs.cluster_of.at("c"));
    EXPECT_NE(cs.cluster_of.at("a"), cs.cluster_of.at("d"));
    EXPECT_NE(cs.cluster_of.at("x"), cs.cluster_of.at("y"));
    EXPECT_TRUE(cs.cluster_of.count("lonely"));
    EXPECT_EQ(cs.clusters[cs.cluster_of.at("a")], (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(cs.size(), 5u);
}

TEST(Cospend, ExclusionsAndCoinbaseDoNotMerge)
{
    auto cb = rtx("cb", {"m"}, {{"m2", 1}});
    cb.coinbase = true;
    cb.inputs[0].coinbase = true;
    cb.inputs[0].address.reset();
    const auto ex = rtx("ex", {"p", "q"}, {});
    const ClusterSet cs = cospend_clusters({cb, ex}, {ex.txid});
    EXPECT_NE(cs.cluster_of.at("p"), cs.cluster_of.at("q"));
}

TEST(ClusterLabels, PropagatesOnlyWithinSingleEntityClusters)
{
    const std::vector<ResolvedTransaction> txs = {rtx("1", {"f1", "x1"}, {}), rtx("2", {"g1", "s1", "x2"}, {})};
    const ClusterSet cs = cospend_clusters(txs, {});
    LabelTable t;
    t.assign("f1", label(Entity::FSB, 5));
    t.assign("g1", label(Entity::GRU));
    t.assign("s1", label(Entity::SVR));
    EXPECT_EQ(propagate_cluster_labels(cs, t), 1u);
    EXPECT_EQ(t.entity_of("x1"), Entity::FSB);
    EXPECT_EQ(t.find("x1")->source, LabelSource::ClusterPropagated);
    EXPECT_EQ(t.find("x1")->first_seen, 5u);
    EXPECT_FALSE(t.entity_of("x2"));
    const ClusterStats st = cluster_stats(cs, t, txs, {});
    ASSERT_EQ(st.violations.size(), 1u);
    EXPECT_EQ(st.violations[0], cs.cluster_of.at("g1"));
}

TEST(ClusterStats, SingletonSvrClusters)
{
    // per-cluster transaction counts {2, 2, 1}; expected moments from tests/oracles/money_vectors.py
    const std::vector<ResolvedTransaction> txs = {rtx("1", {"bank"}, {{"s0", 1}}), rtx("2", {"s0"}, {{"infra", 1}}),
                                                  rtx("3", {"bank"}, {{"s1", 1}}), rtx("4", {"s1"}, {{"infra", 1}}),
                                                  rtx("5", {"payer"}, {{"s2", 1}})};
    LabelTable t;
    for (const char* a : {"s0", "s1", "s2"}) t.assign(a, label(Entity::SVR));
    const ClusterSet cs = cospend_clusters(txs, {});
    const ClusterStats st = cluster_stats(cs, t, txs, {});
    ASSERT_EQ(st.rows.size(), 3u);
    EXPECT_EQ(st.rows[0].entity, Entity::GRU);
    EXPECT_EQ(st.rows[1].entity, Entity::SVR);
    EXPECT_EQ(st.rows[2].entity, Entity::FSB);
    const ClusterRow& svr = st.row(Entity::SVR);
    EXPECT_EQ(svr.addresses, 3u);
    EXPECT_EQ(svr.clusters, 3u);
    EXPECT_NEAR(svr.size_mean, 1.0, 1e-9);
    EXPECT_NEAR(svr.size_std, 0.0, 1e-9);
    EXPECT_NEAR(svr.tx_mean, 1.666667, 1e-6);
    EXPECT_NEAR(svr.tx_std, 0.471405, 1e-6);
    EXPECT_EQ(st.row(Entity::GRU).clusters, 0u);
}

TEST(ClusterStats, ExportHasSchemaAndRows)
{
    const ClusterSet cs = cospend_clusters({rtx("1", {"a", "b"}, {})}, {});
    LabelTable t;
    t.assign("a", label(Entity::FSB));
    std::ostringstream out;
    export_clusters(cs, t, out);
    EXPECT_EQ(out.str().rfind("# schema_version: 1\ncluster_id,address,entity\n", 0), 0u);
    EXPECT_NE(out.str().find(",a,FSB"), std::string::npos);
}
