// SPDX-License-Identifier: Apache-2.0
#include "isync/mac/codec.hpp"

#include <algorithm>

namespace isync::mac {

const char* to_string(IsyncMsg m) {
  switch (m) {
    case IsyncMsg::S1: return "S1";
    case IsyncMsg::F1: return "F1";
    case IsyncMsg::S2: return "S2";
    case IsyncMsg::S3: return "S3";
    case IsyncMsg::F2: return "F2";
  }
  return "?";
}

Direction direction_of(IsyncMsg m) {
  return m == IsyncMsg::S2 ? Direction::Uplink : Direction::Downlink;
}

std::uint8_t type_bits_of(IsyncMsg m) {
  switch (m) {
    case IsyncMsg::S1: return 0b00;
    case IsyncMsg::F1: return 0b01;
    case IsyncMsg::S3: return 0b10;
    case IsyncMsg::F2: return 0b11;
    case IsyncMsg::S2: return 0b00;
  }
  return 0;
}

std::optional<IsyncMsg> msg_from(Direction dir, std::uint8_t type_bits) {
  if (dir == Direction::Downlink) {
    switch (type_bits & 0b11) {
      case 0b00: return IsyncMsg::S1;
      case 0b01: return IsyncMsg::F1;
      case 0b10: return IsyncMsg::S3;
      case 0b11: return IsyncMsg::F2;
    }
  } else if ((type_bits & 0b11) == 0b00) {
    return IsyncMsg::S2;
  }
  return std::nullopt;
}

IsyncMsg IsyncCe::msg() const {
  struct V {
    IsyncMsg operator()(const CeS1&) const { return IsyncMsg::S1; }
    IsyncMsg operator()(const CeF1&) const { return IsyncMsg::F1; }
    IsyncMsg operator()(const CeS2&) const { return IsyncMsg::S2; }
    IsyncMsg operator()(const CeS3&) const { return IsyncMsg::S3; }
    IsyncMsg operator()(const CeF2&) const { return IsyncMsg::F2; }
  };
  return std::visit(V{}, body);
}

bool LcidTable::is_comm(std::uint8_t lcid) const {
  return std::find(comm.begin(), comm.end(), lcid) != comm.end();
}

namespace {

void put_u64_be(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16_be(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void put_suffix_be(Bytes& out, const CompressedTimestamp& c) {
  for (int i = c.n_bytes - 1; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>(c.suffix >> (8 * i)));
}

// Subheader for length-framed payloads: [0|F|LCID] + L (1 or 2 bytes).
bool put_framed_subheader(Bytes& out, std::uint8_t lcid, std::size_t len) {
  if (len > 0xffff) return false;
  const bool f = len > 0xff;
  out.push_back(static_cast<std::uint8_t>((f ? 0x40 : 0x00) | (lcid & 0x3f)));
  if (f) {
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(len & 0xff));
  } else {
    out.push_back(static_cast<std::uint8_t>(len));
  }
  return true;
}

std::optional<Bytes> sdu_body(const IsyncSdu& sdu, std::string* why) {
  Bytes body;
  switch (sdu.kind) {
    case IsyncSdu::Kind::Timestamp:
      put_u64_be(body, sdu.ts);
      return body;
    case IsyncSdu::Kind::Feedback:
    case IsyncSdu::Kind::Sqi:
      body.push_back(static_cast<std::uint8_t>(sdu.kind));
      body.insert(body.end(), sdu.content.begin(), sdu.content.end());
      if (body.size() == 8) {
        *why = "non-timestamp SDU body of 8 bytes would alias a timestamp";
        return std::nullopt;
      }
      if (body.size() == 1) {
        *why = "non-timestamp SDU requires content";
        return std::nullopt;
      }
      return body;
  }
  *why = "unknown SDU kind";
  return std::nullopt;
}

std::optional<Bytes> aggregate_body(const AggregateSdu& agg, std::string* why) {
  if (agg.members.empty()) {
    *why = "aggregate with no members";
    return std::nullopt;
  }
  if (agg.members.size() > 0xff) {
    *why = "aggregate member count exceeds 255";
    return std::nullopt;
  }
  const std::size_t payload_size = agg.members.front().payload.size();
  Bytes body;
  body.push_back(static_cast<std::uint8_t>(agg.members.size()));
  for (const auto& m : agg.members) {
    if (m.payload.size() != payload_size) {
      *why = "aggregate member payloads must have a uniform size";
      return std::nullopt;
    }
    put_u16_be(body, m.ue);
    body.insert(body.end(), m.payload.begin(), m.payload.end());
  }
  return body;
}

}  // namespace

Expected<Bytes, EncodeError> encode_pdu(const MacPdu& pdu, const LcidTable& table) {
  Bytes out;
  for (std::size_t i = 0; i < pdu.subpdus.size(); ++i) {
    const MacSubPdu& sub = pdu.subpdus[i];

    if (const auto* ce = std::get_if<IsyncCe>(&sub)) {
      out.push_back(static_cast<std::uint8_t>((type_bits_of(ce->msg()) << 6) |
                                              (table.isync_ce & 0x3f)));
      if (const auto* f1 = std::get_if<CeF1>(&ce->body)) {
        put_u64_be(out, f1->t1);
      } else if (const auto* s2 = std::get_if<CeS2>(&ce->body)) {
        out.push_back(s2->sqi);
      } else if (const auto* s3 = std::get_if<CeS3>(&ce->body)) {
        if (s3->t4.n_bytes < 1 || s3->t4.n_bytes > 8)
          return EncodeError{i, "compressed timestamp byte count out of range"};
        out.push_back(static_cast<std::uint8_t>(s3->t4.n_bytes - 1));
        put_suffix_be(out, s3->t4);
      } else if (const auto* f2 = std::get_if<CeF2>(&ce->body)) {
        if (f2->t5.n_bytes < 1 || f2->t5.n_bytes > 8)
          return EncodeError{i, "compressed timestamp byte count out of range"};
        out.push_back(static_cast<std::uint8_t>(f2->t5.n_bytes - 1));
        put_suffix_be(out, f2->t5);
      }
      continue;
    }

    if (const auto* sdu = std::get_if<IsyncSdu>(&sub)) {
      std::string why;
      auto body = sdu_body(*sdu, &why);
      if (!body) return EncodeError{i, why};
      if (!put_framed_subheader(out, table.isync_sdu, body->size()))
        return EncodeError{i, "length overflow"};
      out.insert(out.end(), body->begin(), body->end());
      continue;
    }

    if (const auto* agg = std::get_if<AggregateSdu>(&sub)) {
      std::string why;
      auto body = aggregate_body(*agg, &why);
      if (!body) return EncodeError{i, why};
      if (!put_framed_subheader(out, table.isync_agg, body->size()))
        return EncodeError{i, "length overflow"};
      out.insert(out.end(), body->begin(), body->end());
      continue;
    }

    if (const auto* comm = std::get_if<CommSdu>(&sub)) {
      if (!table.is_comm(comm->lcid))
        return EncodeError{i, "LCID not in the configured comm set"};
      if (!put_framed_subheader(out, comm->lcid, comm->payload.size()))
        return EncodeError{i, "length overflow"};
      out.insert(out.end(), comm->payload.begin(), comm->payload.end());
      continue;
    }

    if (const auto* pad = std::get_if<Padding>(&sub)) {
      if (i + 1 != pdu.subpdus.size()) return EncodeError{i, "padding must be the last sub-PDU"};
      out.push_back(table.padding & 0x3f);
      out.insert(out.end(), pad->pad_bytes, 0);
      continue;
    }
  }
  return out;
}

namespace {

struct Reader {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;

  bool eof() const { return pos >= data.size(); }
  std::size_t left() const { return data.size() - pos; }
  std::uint8_t u8() { return data[pos++]; }
  std::uint64_t be(std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = (v << 8) | data[pos++];
    return v;
  }
  Bytes take(std::size_t n) {
    Bytes out(data.begin() + pos, data.begin() + pos + n);
    pos += n;
    return out;
  }
};

}  // namespace

Expected<MacPdu, DecodeError> decode_pdu(std::span<const std::uint8_t> bytes, Direction dir,
                                         const LcidTable& table) {
  MacPdu pdu;
  Reader r{bytes};
  std::size_t index = 0;

  while (!r.eof()) {
    const std::size_t start = r.pos;
    const std::uint8_t octet = r.u8();
    const std::uint8_t lcid = octet & 0x3f;

    if (lcid == table.isync_ce) {
      const std::uint8_t bits = octet >> 6;
      const auto msg = msg_from(dir, bits);
      if (!msg) return DecodeError{index, start, "unknown CE type bits for link direction"};
      switch (*msg) {
        case IsyncMsg::S1:
          pdu.subpdus.push_back(IsyncCe{CeS1{}});
          break;
        case IsyncMsg::F1: {
          if (r.left() < 8) return DecodeError{index, start, "truncated F1 timestamp"};
          pdu.subpdus.push_back(IsyncCe{CeF1{r.be(8)}});
          break;
        }
        case IsyncMsg::S2: {
          if (r.left() < 1) return DecodeError{index, start, "truncated SQI"};
          pdu.subpdus.push_back(IsyncCe{CeS2{r.u8()}});
          break;
        }
        case IsyncMsg::S3:
        case IsyncMsg::F2: {
          if (r.left() < 1) return DecodeError{index, start, "truncated compressed timestamp"};
          const std::uint8_t len_byte = r.u8();
          if (len_byte & 0xf8)
            return DecodeError{index, start, "reserved bits set in compressed-length byte"};
          const std::uint8_t n = static_cast<std::uint8_t>((len_byte & 0x07) + 1);
          if (r.left() < n) return DecodeError{index, start, "truncated compressed timestamp"};
          const CompressedTimestamp cts{n, r.be(n)};
          if (*msg == IsyncMsg::S3)
            pdu.subpdus.push_back(IsyncCe{CeS3{cts}});
          else
            pdu.subpdus.push_back(IsyncCe{CeF2{cts}});
          break;
        }
      }
      ++index;
      continue;
    }

    if (lcid == table.padding) {
      pdu.subpdus.push_back(Padding{static_cast<std::uint32_t>(r.left())});
      r.pos = r.data.size();
      ++index;
      continue;
    }

    // Length-framed families share the [R|F|LCID][L] grammar.
    const bool f = (octet & 0x40) != 0;
    const std::size_t len_size = f ? 2 : 1;
    if (r.left() < len_size) return DecodeError{index, start, "truncated length field"};
    const std::size_t len = static_cast<std::size_t>(r.be(len_size));
    if (r.left() < len) return DecodeError{index, start, "truncated payload"};

    if (lcid == table.isync_sdu) {
      if (len == 8) {
        pdu.subpdus.push_back(IsyncSdu{IsyncSdu::Kind::Timestamp, r.be(8), {}});
      } else {
        if (len == 0) return DecodeError{index, start, "empty ISynC SDU"};
        const std::uint8_t kind = r.u8();
        if (kind != static_cast<std::uint8_t>(IsyncSdu::Kind::Feedback) &&
            kind != static_cast<std::uint8_t>(IsyncSdu::Kind::Sqi))
          return DecodeError{index, start, "unknown ISynC SDU kind"};
        if (len == 1) return DecodeError{index, start, "ISynC SDU without content"};
        pdu.subpdus.push_back(
            IsyncSdu{static_cast<IsyncSdu::Kind>(kind), 0, r.take(len - 1)});
      }
    } else if (lcid == table.isync_agg) {
      if (len < 1) return DecodeError{index, start, "empty aggregate"};
      const std::uint8_t count = r.u8();
      if (count == 0) return DecodeError{index, start, "aggregate with zero members"};
      const std::size_t rest = len - 1;
      if (rest % count != 0)
        return DecodeError{index, start, "aggregate body not divisible by member count"};
      const std::size_t per = rest / count;
      if (per < 2) return DecodeError{index, start, "aggregate member record too small"};
      AggregateSdu agg;
      for (std::uint8_t m = 0; m < count; ++m) {
        AggregateSdu::Member member;
        member.ue = static_cast<std::uint16_t>(r.be(2));
        member.payload = r.take(per - 2);
        agg.members.push_back(std::move(member));
      }
      pdu.subpdus.push_back(std::move(agg));
    } else if (table.is_comm(lcid)) {
      pdu.subpdus.push_back(CommSdu{lcid, r.take(len)});
    } else {
      return DecodeError{index, start, "unknown LCID"};
    }
    ++index;
  }
  return pdu;
}

std::size_t encoded_size(const MacSubPdu& sub, const LcidTable& table) {
  struct V {
    const LcidTable& table;
    std::size_t framed(std::size_t body) const { return 1 + (body > 0xff ? 2 : 1) + body; }

    std::size_t operator()(const IsyncCe& ce) const {
      struct B {
        std::size_t operator()(const CeS1&) const { return 0; }
        std::size_t operator()(const CeF1&) const { return 8; }
        std::size_t operator()(const CeS2&) const { return 1; }
        std::size_t operator()(const CeS3& s) const { return 1u + s.t4.n_bytes; }
        std::size_t operator()(const CeF2& f) const { return 1u + f.t5.n_bytes; }
      };
      return 1 + std::visit(B{}, ce.body);
    }
    std::size_t operator()(const IsyncSdu& s) const {
      return framed(s.kind == IsyncSdu::Kind::Timestamp ? 8 : 1 + s.content.size());
    }
    std::size_t operator()(const AggregateSdu& a) const {
      std::size_t body = 1;
      for (const auto& m : a.members) body += 2 + m.payload.size();
      return framed(body);
    }
    std::size_t operator()(const CommSdu& c) const { return framed(c.payload.size()); }
    std::size_t operator()(const Padding& p) const { return 1 + p.pad_bytes; }
  };
  return std::visit(V{table}, sub);
}

std::size_t encoded_size(const MacPdu& pdu, const LcidTable& table) {
  std::size_t total = 0;
  for (const auto& sub : pdu.subpdus) total += encoded_size(sub, table);
  return total;
}

IsyncSdu make_timestamp_sdu(std::uint64_t ts) { return IsyncSdu{IsyncSdu::Kind::Timestamp, ts, {}}; }
IsyncSdu make_feedback_sdu(std::uint8_t flags) {
  return IsyncSdu{IsyncSdu::Kind::Feedback, 0, {flags}};
}
IsyncSdu make_sqi_sdu(std::uint8_t level) { return IsyncSdu{IsyncSdu::Kind::Sqi, 0, {level}}; }

}  // namespace isync::mac
