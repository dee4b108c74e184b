// Copyright 2026 The Skefl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>

#include "gtest/gtest.h"
#include "skefl/error.hpp"
#include "skefl/sim_net.hpp"

namespace skefl::net {
namespace {

class SimNetworkTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (PartyId p : {kServer, PartyId{1}, PartyId{2}, PartyId{3}, kBulletin}) {
      net_.register_party(p);
    }
  }
  SimNetwork net_;
};

TEST_F(SimNetworkTest, EmptyRoundHasEmptyTranscript) {
  net_.deliver_all(0);
  const RoundTranscript t = net_.transcript(0);
  EXPECT_TRUE(t.messages.empty());
  EXPECT_EQ(t.total_bytes(), 0U);
}

TEST_F(SimNetworkTest, UnknownPartiesAreRoutingErrors) {
  try {
    net_.send(0, 1, 9, MessageKind::kShare, {}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRouting);
  }
  EXPECT_THROW(net_.send(0, 9, 1, MessageKind::kShare, {}, 0), Error);
  EXPECT_THROW(net_.take_inbox(42), Error);
}

TEST_F(SimNetworkTest, DeliveryOrderIsSenderThenSeq) {
  net_.send(0, 3, 1, MessageKind::kShare, {3}, 1);
  net_.send(0, 1, 2, MessageKind::kShare, {1}, 1);
  net_.send(0, 2, 1, MessageKind::kShare, {2}, 1);
  net_.send(0, 1, 3, MessageKind::kShare, {4}, 1);
  net_.deliver_all(0);
  const RoundTranscript t = net_.transcript(0);
  ASSERT_EQ(t.messages.size(), 4U);
  std::vector<std::pair<PartyId, std::uint64_t>> order;
  for (const Message& m : t.messages) order.emplace_back(m.sender, m.seq);
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
  const auto inbox = net_.take_inbox(1);
  ASSERT_EQ(inbox.size(), 2U);
  EXPECT_EQ(inbox[0].sender, 2U);
  EXPECT_EQ(inbox[1].sender, 3U);
  EXPECT_TRUE(net_.take_inbox(1).empty());
}

TEST_F(SimNetworkTest, ConservationAndCounters) {
  for (int i = 0; i < 10; ++i) {
    net_.send(0, 1 + i % 3, kServer, MessageKind::kGarbled, Bytes(i, 0), 5);
  }
  net_.send(1, kServer, 1, MessageKind::kGlobalModel, Bytes(3, 0), 5);
  net_.send(0, 1, kBulletin, MessageKind::kDigest, Bytes(2, 0), 0);
  net_.deliver_all(0);
  EXPECT_EQ(net_.pending(), 1U);  // round 1 still queued
  const RoundTranscript t = net_.transcript(0);
  EXPECT_EQ(t.messages.size(), 11U);
  EXPECT_EQ(t.per_kind, t.recount());
  EXPECT_EQ(t.stats(MessageKind::kGarbled).count, 10U);
  EXPECT_EQ(t.stats(MessageKind::kGarbled).bytes, 45U);
  EXPECT_EQ(t.stats(MessageKind::kGarbled).elements, 50U);
  EXPECT_EQ(t.client_to_server(), 10U);
  EXPECT_EQ(t.client_to_client(), 0U);
  EXPECT_EQ(net_.take_inbox(kServer).size(), 10U);
  net_.deliver_all(1);
  EXPECT_EQ(net_.transcript(1).server_to_client(), 1U);
  EXPECT_EQ(net_.pending(), 0U);
}

TEST_F(SimNetworkTest, CsvAndJsonExports) {
  net_.send(0, 1, 2, MessageKind::kShare, Bytes(7, 1), 2);
  net_.send(0, 2, kServer, MessageKind::kGarbled, Bytes(4, 1), 2);
  net_.deliver_all(0);
  const RoundTranscript t = net_.transcript(0);
  EXPECT_EQ(t.to_csv(),
            "seq,round,sender,receiver,kind,bytes\n"
            "0,0,1,2,Share,7\n"
            "1,0,2,server,Garbled,4\n");
  const nlohmann::json j = t.to_json();
  EXPECT_EQ(j.at("messages").size(), 2U);
  EXPECT_EQ(j.at("counters").at("Share").at("count"), 1);
  EXPECT_EQ(j.at("messages")[0].at("sha256").get<std::string>().size(), 64U);
}

TEST_F(SimNetworkTest, ShuffledDeliveryKeepsEveryMessage) {
  net_.set_shuffle_seed(5);
  for (int i = 0; i < 30; ++i) {
    net_.send(0, 1 + i % 3, kServer, MessageKind::kGarbled, Bytes{static_cast<std::uint8_t>(i)}, 1);
  }
  net_.deliver_all(0);
  auto inbox = net_.take_inbox(kServer);
  ASSERT_EQ(inbox.size(), 30U);
  std::vector<int> seen;
  for (const Message& m : inbox) seen.push_back(m.payload[0]);
  std::vector<int> sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 30; ++i) EXPECT_EQ(sorted[i], i);
}

}  // namespace
}  // namespace skefl::net
