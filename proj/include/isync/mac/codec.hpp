// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "isync/mac/ts_compress.hpp"
#include "isync/sim/channel.hpp"
#include "isync/util/expected.hpp"

namespace isync::mac {

using Bytes = std::vector<std::uint8_t>;

/// The five exchange messages of Table 1. Type bits are direction-scoped:
/// DL-00 S1, DL-01 F1, DL-10 S3, DL-11 F2, UL-00 S2.
enum class IsyncMsg : std::uint8_t { S1, F1, S2, S3, F2 };

const char* to_string(IsyncMsg m);
Direction direction_of(IsyncMsg m);
std::uint8_t type_bits_of(IsyncMsg m);
std::optional<IsyncMsg> msg_from(Direction dir, std::uint8_t type_bits);

// --- ISynC control elements -------------------------------------------------
// A CE sub-PDU is a single subheader octet [type:2|LCID:6] followed by its
// content; the two bits that are R/F on data subheaders carry the message
// type, and there is no length octet (content size is implied by the type).

struct CeS1 {  // sync flag, empty content
  bool operator==(const CeS1&) const = default;
};
struct CeF1 {  // full 8-byte T1
  std::uint64_t t1 = 0;
  bool operator==(const CeF1&) const = default;
};
struct CeS2 {  // SQI report
  std::uint8_t sqi = 0;
  bool operator==(const CeS2&) const = default;
};
struct CeS3 {  // compressed T4: [00000|n-1:3] + n suffix bytes
  CompressedTimestamp t4;
  bool operator==(const CeS3&) const = default;
};
struct CeF2 {  // compressed T5, same layout as S3
  CompressedTimestamp t5;
  bool operator==(const CeF2&) const = default;
};

struct IsyncCe {
  std::variant<CeS1, CeF1, CeS2, CeS3, CeF2> body;
  IsyncMsg msg() const;
  bool operator==(const IsyncCe&) const = default;
};

// --- ISynC service data units -------------------------------------------------
// An 8-byte body is a bare full timestamp (LCID 29, L = 8). Other message
// kinds carry a leading kind byte; their encoded body must not total 8
// bytes, so the two forms never collide.

struct IsyncSdu {
  enum class Kind : std::uint8_t { Timestamp = 0x00, Feedback = 0x01, Sqi = 0x02 };
  Kind kind = Kind::Timestamp;
  std::uint64_t ts = 0;        // Timestamp only
  Bytes content;               // Feedback / Sqi only
  bool operator==(const IsyncSdu&) const = default;
};

/// Cluster-head aggregate: body = [count][(ue_id:2, payload)...] with one
/// uniform payload size per aggregate (derivable from L and count).
struct AggregateSdu {
  struct Member {
    std::uint16_t ue = 0;
    Bytes payload;
    bool operator==(const Member&) const = default;
  };
  std::vector<Member> members;
  bool operator==(const AggregateSdu&) const = default;
};

struct CommSdu {
  std::uint8_t lcid = 4;
  Bytes payload;
  bool operator==(const CommSdu&) const = default;
};

struct Padding {
  std::uint32_t pad_bytes = 0;  // zero-fill after the subheader octet
  bool operator==(const Padding&) const = default;
};

using MacSubPdu = std::variant<IsyncCe, IsyncSdu, AggregateSdu, CommSdu, Padding>;

struct MacPdu {
  std::vector<MacSubPdu> subpdus;
  bool operator==(const MacPdu&) const = default;
};

/// Logical channel map. Anything outside it is a decode error.
struct LcidTable {
  std::uint8_t isync_sdu = 29;
  std::uint8_t isync_ce = 30;
  std::uint8_t isync_agg = 28;
  std::uint8_t padding = 63;
  std::vector<std::uint8_t> comm = {4};

  bool is_comm(std::uint8_t lcid) const;
};

struct EncodeError {
  std::size_t subpdu_index = 0;
  std::string reason;
};

struct DecodeError {
  std::size_t subpdu_index = 0;  // index of the offending sub-PDU
  std::size_t byte_offset = 0;
  std::string reason;
};

Expected<Bytes, EncodeError> encode_pdu(const MacPdu& pdu, const LcidTable& table = {});
Expected<MacPdu, DecodeError> decode_pdu(std::span<const std::uint8_t> bytes, Direction dir,
                                         const LcidTable& table = {});

/// Wire size of one sub-PDU, subheader included.
std::size_t encoded_size(const MacSubPdu& sub, const LcidTable& table = {});
std::size_t encoded_size(const MacPdu& pdu, const LcidTable& table = {});

IsyncSdu make_timestamp_sdu(std::uint64_t ts);
IsyncSdu make_feedback_sdu(std::uint8_t flags);
IsyncSdu make_sqi_sdu(std::uint8_t level);

}  // namespace isync::mac
