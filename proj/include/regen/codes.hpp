#ifndef REGEN_CODES_HPP
#define REGEN_CODES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regen/gf2.hpp"
#include "regen/rational.hpp"

namespace regen {

enum class CodeId { MSR, MBR, INTERIOR };

inline std::string code_name(CodeId c) {
    switch (c) {
        case CodeId::MSR: return "msr";
        case CodeId::MBR: return "mbr";
        case CodeId::INTERIOR: return "interior";
    }
    throw std::invalid_argument("bad code id");
}

inline std::optional<CodeId> parse_code(const std::string& s) {
    if (s == "msr") return CodeId::MSR;
    if (s == "mbr") return CodeId::MBR;
    if (s == "interior") return CodeId::INTERIOR;
    return std::nullopt;
}

struct CodeParameters {
    int n, k, d;
    int B, alpha, beta;
    Rat alpha_bar, beta_bar;
};

// One element per bit, each 0 or 1; small and easy to compare exactly.
using Bits = std::vector<std::uint8_t>;

struct Message {
    Bits bits;
};

struct NodeShare {
    int node_id = 0;
    Bits bits;
};

struct RepairPacket {
    int helper_id = 0;
    int failed_id = 0;
    Bits bits;
};

inline CodeParameters code_parameters(CodeId code) {
    switch (code) {
        case CodeId::MSR:
            return {4, 3, 3, 3, 1, 1, make_rat(1, 3), make_rat(1, 3)};
        case CodeId::MBR:
            return {4, 3, 3, 6, 3, 1, make_rat(1, 2), make_rat(1, 6)};
        case CodeId::INTERIOR:
            return {4, 3, 3, 8, 3, 2, make_rat(3, 8), make_rat(1, 4)};
    }
    throw std::invalid_argument("bad code id");
}

namespace detail {

inline std::uint32_t bits_to_mask(const Bits& b) {
    std::uint32_t m = 0;
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i]) m |= 1u << i;
    return m;
}

inline Bits mask_to_bits(std::uint32_t m, int n) {
    Bits b(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) b[static_cast<size_t>(i)] = (m >> i) & 1u;
    return b;
}

struct CodeTables {
    CodeParameters params;
    // generator[i][k] is the message-bit mask of stored bit k on node i+1.
    std::array<std::vector<std::uint32_t>, 4> generator;
    // Per missing node: the stacked 3-node encoding matrix and a left
    // inverse mapping stacked share bits back to the message.
    std::array<gf2::Matrix, 4> view;
    std::array<gf2::Matrix, 4> decoder;
};

inline std::uint32_t encode_node_mask(const CodeTables& t, int node_id, std::uint32_t msg) {
    std::uint32_t share = 0;
    const auto& rows = t.generator[static_cast<size_t>(node_id - 1)];
    for (size_t k = 0; k < rows.size(); ++k)
        share |= static_cast<std::uint32_t>(__builtin_parity(rows[k] & msg)) << k;
    return share;
}

inline Bits repair_packet_bits(CodeId code, const Bits& helper_bits, int helper_id,
                               int failed_id) {
    if (code == CodeId::MSR) return {helper_bits[0]};
    if (code == CodeId::MBR) {
        // Stored order on node i is the lexicographic list of pairs
        // containing i; the forwarded bit is the {helper, failed} pair.
        int lo = std::min(helper_id, failed_id), hi = std::max(helper_id, failed_id);
        int pos = 0;
        for (int a = 1; a <= 4; ++a) {
            for (int b = a + 1; b <= 4; ++b) {
                if (a != helper_id && b != helper_id) continue;
                if (a == lo && b == hi) return {helper_bits[static_cast<size_t>(pos)]};
                ++pos;
            }
        }
        throw std::logic_error("pair position not found");
    }
    // Interior code, in helper-local form: what a helper sends depends
    // only on its cyclic offset from the failed node and its own bits.
    int offset = ((helper_id - failed_id) % 4 + 4) % 4;
    std::uint8_t b1 = helper_bits[0], b2 = helper_bits[1], b3 = helper_bits[2];
    switch (offset) {
        case 1: return {b1, static_cast<std::uint8_t>(b1 ^ b2 ^ b3)};
        case 2: return {b2, static_cast<std::uint8_t>(b1 ^ b2 ^ b3)};
        case 3: return {static_cast<std::uint8_t>(b1 ^ b2), static_cast<std::uint8_t>(b2 ^ b3)};
        default: throw std::invalid_argument("helper equals failed node");
    }
}

inline Bits repair_rebuild_bits(CodeId code, int failed_id,
                                const std::array<const RepairPacket*, 4>& by_offset) {
    if (code == CodeId::MSR) {
        std::uint8_t v = 0;
        for (int o = 1; o <= 3; ++o) v ^= by_offset[static_cast<size_t>(o)]->bits[0];
        return {v};
    }
    if (code == CodeId::MBR) {
        Bits out;
        for (int other = 1; other <= 4; ++other) {
            if (other == failed_id) continue;
            int offset = ((other - failed_id) % 4 + 4) % 4;
            // Pairs containing failed_id, lex order = ascending other.
            out.push_back(by_offset[static_cast<size_t>(offset)]->bits[0]);
        }
        return out;
    }
    const Bits& h1 = by_offset[1]->bits;
    const Bits& h2 = by_offset[2]->bits;
    const Bits& h3 = by_offset[3]->bits;
    std::uint8_t c14 = h1[1] ^ h2[0];
    std::uint8_t c15 = h2[1] ^ h3[0];
    std::uint8_t c16 = h3[1] ^ h1[0];
    return {static_cast<std::uint8_t>(c14 ^ c15), static_cast<std::uint8_t>(c14 ^ c16),
            static_cast<std::uint8_t>(h1[0] ^ h2[0] ^ h3[0])};
}

inline CodeTables build_tables(CodeId code) {
    CodeTables t;
    t.params = code_parameters(code);
    switch (code) {
        case CodeId::MSR:
            t.generator = {{{0b001u}, {0b010u}, {0b100u}, {0b111u}}};
            break;
        case CodeId::MBR: {
            // Message bits indexed by pairs {1,2},{1,3},{1,4},{2,3},{2,4},{3,4}.
            int pair_index[5][5] = {};
            int idx = 0;
            for (int a = 1; a <= 4; ++a)
                for (int b = a + 1; b <= 4; ++b) pair_index[a][b] = idx++;
            for (int i = 1; i <= 4; ++i) {
                std::vector<std::uint32_t> rows;
                for (int a = 1; a <= 4; ++a)
                    for (int b = a + 1; b <= 4; ++b)
                        if (a == i || b == i) rows.push_back(1u << pair_index[a][b]);
                t.generator[static_cast<size_t>(i - 1)] = rows;
            }
            break;
        }
        case CodeId::INTERIOR:
            // Message order (x1,x2,y1,y2,z1,z2,t1,t2) = bits 0..7.
            t.generator = {{{0x01u, 0x02u, 0xE4u},
                            {0x04u, 0x08u, 0x93u},
                            {0x10u, 0x20u, 0x4Eu},
                            {0x40u, 0x80u, 0x39u}}};
            break;
    }
    for (int missing = 1; missing <= 4; ++missing) {
        gf2::Matrix a(3 * t.params.alpha, t.params.B);
        int r = 0;
        for (int i = 1; i <= 4; ++i) {
            if (i == missing) continue;
            for (auto mask : t.generator[static_cast<size_t>(i - 1)])
                a.row[static_cast<size_t>(r++)] = mask;
        }
        auto inv = gf2::left_inverse(a);
        if (!inv) throw std::logic_error("three-node view is not full rank");
        t.view[static_cast<size_t>(missing - 1)] = a;
        t.decoder[static_cast<size_t>(missing - 1)] = *inv;
    }
    if (code == CodeId::INTERIOR) {
        // The published repair table only covers one failed node; the
        // cyclic generalization is checked here exhaustively instead of
        // being trusted.
        for (std::uint32_t msg = 0; msg < 256; ++msg) {
            for (int failed = 1; failed <= 4; ++failed) {
                std::array<const RepairPacket*, 4> by_offset{};
                std::array<RepairPacket, 4> storage;
                for (int helper = 1; helper <= 4; ++helper) {
                    if (helper == failed) continue;
                    Bits hb = mask_to_bits(encode_node_mask(t, helper, msg), 3);
                    int offset = ((helper - failed) % 4 + 4) % 4;
                    storage[static_cast<size_t>(offset)] =
                        RepairPacket{helper, failed, repair_packet_bits(code, hb, helper, failed)};
                    by_offset[static_cast<size_t>(offset)] = &storage[static_cast<size_t>(offset)];
                }
                Bits rebuilt = repair_rebuild_bits(code, failed, by_offset);
                Bits expect = mask_to_bits(encode_node_mask(t, failed, msg), 3);
                if (rebuilt != expect)
                    throw std::logic_error("interior repair self-test failed");
            }
        }
    }
    return t;
}

inline const CodeTables& tables(CodeId code) {
    static const CodeTables msr = build_tables(CodeId::MSR);
    static const CodeTables mbr = build_tables(CodeId::MBR);
    static const CodeTables interior = build_tables(CodeId::INTERIOR);
    switch (code) {
        case CodeId::MSR: return msr;
        case CodeId::MBR: return mbr;
        case CodeId::INTERIOR: return interior;
    }
    throw std::invalid_argument("bad code id");
}

inline void check_node_id(int id) {
    if (id < 1 || id > 4) throw std::invalid_argument("node id out of range");
}

}  // namespace detail

inline std::array<NodeShare, 4> encode(CodeId code, const Message& message) {
    const auto& t = detail::tables(code);
    if (static_cast<int>(message.bits.size()) != t.params.B)
        throw std::invalid_argument("message length does not match code B");
    std::uint32_t msg = detail::bits_to_mask(message.bits);
    std::array<NodeShare, 4> shares;
    for (int i = 1; i <= 4; ++i)
        shares[static_cast<size_t>(i - 1)] =
            NodeShare{i, detail::mask_to_bits(detail::encode_node_mask(t, i, msg), t.params.alpha)};
    return shares;
}

// Reconstruction from any 3 distinct nodes; nullopt when the shares are
// not a consistent codeword view (corruption signal).
inline std::optional<Message> decode(CodeId code, const std::vector<NodeShare>& shares) {
    const auto& t = detail::tables(code);
    if (shares.size() != 3) throw std::invalid_argument("decode needs exactly 3 shares");
    int seen = 0;
    for (const auto& s : shares) {
        detail::check_node_id(s.node_id);
        if (seen & (1 << s.node_id)) throw std::invalid_argument("duplicate node id");
        seen |= 1 << s.node_id;
        if (static_cast<int>(s.bits.size()) != t.params.alpha)
            throw std::invalid_argument("share length does not match code alpha");
    }
    int missing = 0;
    for (int i = 1; i <= 4; ++i)
        if (!(seen & (1 << i))) missing = i;
    std::uint32_t stacked = 0;
    int pos = 0;
    for (int i = 1; i <= 4; ++i) {
        if (i == missing) continue;
        for (const auto& s : shares)
            if (s.node_id == i)
                for (int k = 0; k < t.params.alpha; ++k)
                    stacked |= static_cast<std::uint32_t>(s.bits[static_cast<size_t>(k)]) << (pos + k);
        pos += t.params.alpha;
    }
    const auto& dec = t.decoder[static_cast<size_t>(missing - 1)];
    std::uint32_t msg = gf2::apply(dec, stacked);
    if (gf2::apply(t.view[static_cast<size_t>(missing - 1)], msg) != stacked)
        return std::nullopt;
    return Message{detail::mask_to_bits(msg, t.params.B)};
}

inline RepairPacket repair_encode(CodeId code, const NodeShare& helper, int failed_id) {
    const auto& t = detail::tables(code);
    detail::check_node_id(helper.node_id);
    detail::check_node_id(failed_id);
    if (helper.node_id == failed_id)
        throw std::invalid_argument("helper equals failed node");
    if (static_cast<int>(helper.bits.size()) != t.params.alpha)
        throw std::invalid_argument("share length does not match code alpha");
    return RepairPacket{helper.node_id, failed_id,
                        detail::repair_packet_bits(code, helper.bits, helper.node_id, failed_id)};
}

inline NodeShare repair_decode(CodeId code, int failed_id,
                               const std::vector<RepairPacket>& packets) {
    const auto& t = detail::tables(code);
    detail::check_node_id(failed_id);
    if (packets.size() != 3) throw std::invalid_argument("repair needs exactly 3 packets");
    std::array<const RepairPacket*, 4> by_offset{};
    for (const auto& p : packets) {
        detail::check_node_id(p.helper_id);
        if (p.failed_id != failed_id) throw std::invalid_argument("packet for wrong failed node");
        if (p.helper_id == failed_id) throw std::invalid_argument("helper equals failed node");
        if (static_cast<int>(p.bits.size()) != t.params.beta)
            throw std::invalid_argument("packet length does not match code beta");
        int offset = ((p.helper_id - failed_id) % 4 + 4) % 4;
        if (by_offset[static_cast<size_t>(offset)])
            throw std::invalid_argument("duplicate helper");
        by_offset[static_cast<size_t>(offset)] = &p;
    }
    return NodeShare{failed_id, detail::repair_rebuild_bits(code, failed_id, by_offset)};
}

// Byte payload framing: the bit stream is the payload bytes in order,
// each byte most-significant-bit first, split into B-bit blocks with
// zero padding. An empty payload still produces one all-zero block so
// every object occupies storage. Byte length travels out of band (the
// simulator catalog keeps it).
inline std::vector<Message> frame_payload(CodeId code, const std::vector<std::uint8_t>& payload) {
    int B = code_parameters(code).B;
    size_t nbits = payload.size() * 8;
    size_t nblocks = nbits == 0 ? 1 : (nbits + static_cast<size_t>(B) - 1) / static_cast<size_t>(B);
    std::vector<Message> blocks(nblocks);
    for (size_t m = 0; m < nblocks; ++m) blocks[m].bits.assign(static_cast<size_t>(B), 0);
    for (size_t i = 0; i < nbits; ++i) {
        std::uint8_t bit = (payload[i / 8] >> (7 - i % 8)) & 1u;
        blocks[i / static_cast<size_t>(B)].bits[i % static_cast<size_t>(B)] = bit;
    }
    return blocks;
}

inline std::vector<std::uint8_t> deframe_payload(CodeId code, const std::vector<Message>& blocks,
                                                 std::uint64_t byte_length) {
    int B = code_parameters(code).B;
    std::vector<std::uint8_t> out(byte_length, 0);
    for (std::uint64_t i = 0; i < byte_length * 8; ++i) {
        std::uint64_t block = i / static_cast<std::uint64_t>(B);
        std::uint64_t off = i % static_cast<std::uint64_t>(B);
        if (block >= blocks.size()) throw std::invalid_argument("not enough blocks for length");
        if (blocks[block].bits[off]) out[i / 8] |= 1u << (7 - i % 8);
    }
    return out;
}

// Fixture rendering: MSB-first nibbles, zero padded at the tail.
inline std::string bits_to_hex(const Bits& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (size_t i = 0; i < bits.size(); i += 4) {
        int nibble = 0;
        for (size_t j = 0; j < 4; ++j)
            if (i + j < bits.size() && bits[i + j]) nibble |= 8 >> j;
        out += digits[nibble];
    }
    return out;
}

inline Bits hex_to_bits(const std::string& hex, int nbits) {
    Bits bits(static_cast<size_t>(nbits), 0);
    for (int i = 0; i < nbits; ++i) {
        size_t d = static_cast<size_t>(i) / 4;
        if (d >= hex.size()) throw std::invalid_argument("hex string too short");
        char c = hex[d];
        int v = c >= '0' && c <= '9' ? c - '0'
              : c >= 'a' && c <= 'f' ? c - 'a' + 10
              : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                     : throw std::invalid_argument("bad hex digit");
        bits[static_cast<size_t>(i)] = static_cast<std::uint8_t>((v >> (3 - i % 4)) & 1);
    }
    return bits;
}

}  // namespace regen

#endif
