#ifndef REGEN_CLUSTER_HPP
#define REGEN_CLUSTER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "regen/codes.hpp"

namespace regen {

struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::vector<std::uint8_t> bytes(std::uint64_t n) {
        std::vector<std::uint8_t> out;
        out.reserve(n);
        while (out.size() < n) {
            std::uint64_t v = next();
            for (int i = 7; i >= 0 && out.size() < n; --i)
                out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
        return out;
    }
};

struct Event {
    enum class Kind { Ingest, Fail, Repair };
    Kind kind;
    std::string object_id;          // Ingest
    std::uint64_t length = 0;       // Ingest
    std::uint64_t blocks = 0;       // Ingest
    int node_id = 0;                // Fail / Repair
    std::uint64_t repair_index = 0; // Repair
    std::uint64_t bits_per_helper = 0;
    std::uint64_t total_bits = 0;

    std::string render() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::Ingest: {
                os << "INGEST\t" << object_id << '\t';
                static const char* digits = "0123456789abcdef";
                for (int i = 15; i >= 0; --i) os << digits[(length >> (4 * i)) & 0xF];
                os << '\t' << blocks;
                break;
            }
            case Kind::Fail:
                os << "FAIL\t" << node_id;
                break;
            case Kind::Repair:
                os << "REPAIR\t" << repair_index << '\t' << node_id << '\t' << bits_per_helper
                   << '\t' << total_bits;
                break;
        }
        return os.str();
    }
};

struct RepairEvent {
    int failed_id = 0;
    std::array<std::uint64_t, 3> per_helper_bits{};
    std::uint64_t total_bits = 0;
    std::uint64_t step = 0;
};

struct ClusterState {
    struct Node {
        bool live = true;
        // blocks[obj][blk] is this node's alpha-bit share.
        std::vector<std::vector<Bits>> blocks;
        bool operator==(const Node&) const = default;
    };
    struct ObjectEntry {
        std::string id;
        std::uint64_t length = 0;
        std::uint64_t block_count = 0;
        bool operator==(const ObjectEntry&) const = default;
    };

    CodeId code = CodeId::INTERIOR;
    std::array<Node, 4> nodes;
    std::vector<ObjectEntry> catalog;
    std::vector<Event> log;
    std::uint64_t step = 0;
    std::uint64_t repairs_done = 0;

    std::optional<int> failed_node() const {
        for (int i = 1; i <= 4; ++i)
            if (!nodes[static_cast<size_t>(i - 1)].live) return i;
        return std::nullopt;
    }
    std::uint64_t total_blocks() const {
        std::uint64_t n = 0;
        for (const auto& e : catalog) n += e.block_count;
        return n;
    }
    int object_index(const std::string& id) const {
        for (size_t i = 0; i < catalog.size(); ++i)
            if (catalog[i].id == id) return static_cast<int>(i);
        return -1;
    }
};

// Storage-level equality: what the exactness invariant quantifies over.
// The event log and step counter are bookkeeping, not storage.
inline bool storage_equal(const ClusterState& a, const ClusterState& b) {
    return a.code == b.code && a.nodes == b.nodes && a.catalog == b.catalog;
}

inline ClusterState init_cluster(CodeId code) {
    ClusterState s;
    s.code = code;
    return s;
}

inline void ingest_object(ClusterState& s, const std::string& object_id,
                          const std::vector<std::uint8_t>& payload) {
    if (s.failed_node())
        throw std::invalid_argument("ingest requires all nodes live");
    if (s.object_index(object_id) >= 0)
        throw std::invalid_argument("duplicate object id: " + object_id);
    if (object_id.empty() || object_id.find_first_of(" \t\n") != std::string::npos)
        throw std::invalid_argument("bad object id");
    auto blocks = frame_payload(s.code, payload);
    for (auto& node : s.nodes) node.blocks.emplace_back();
    for (const auto& block : blocks) {
        auto shares = encode(s.code, block);
        for (int i = 0; i < 4; ++i)
            s.nodes[static_cast<size_t>(i)].blocks.back().push_back(shares[static_cast<size_t>(i)].bits);
    }
    s.catalog.push_back({object_id, payload.size(), blocks.size()});
    Event e{Event::Kind::Ingest, object_id, payload.size(), blocks.size(), 0, 0, 0, 0};
    s.log.push_back(e);
    ++s.step;
}

inline void fail_node(ClusterState& s, int node_id) {
    if (node_id < 1 || node_id > 4) throw std::invalid_argument("node id out of range");
    if (auto f = s.failed_node())
        throw std::invalid_argument("node " + std::to_string(*f) + " already failed");
    auto& node = s.nodes[static_cast<size_t>(node_id - 1)];
    for (auto& obj : node.blocks) obj.clear();
    node.live = false;
    Event e{Event::Kind::Fail, "", 0, 0, node_id, 0, 0, 0};
    s.log.push_back(e);
    ++s.step;
}

inline RepairEvent run_repair(ClusterState& s) {
    auto failed = s.failed_node();
    if (!failed) throw std::invalid_argument("no failed node to repair");
    int beta = code_parameters(s.code).beta;
    auto& target = s.nodes[static_cast<size_t>(*failed - 1)];
    RepairEvent ev;
    ev.failed_id = *failed;
    for (size_t obj = 0; obj < s.catalog.size(); ++obj) {
        target.blocks[obj].clear();
        for (std::uint64_t blk = 0; blk < s.catalog[obj].block_count; ++blk) {
            std::vector<RepairPacket> packets;
            int helper_slot = 0;
            for (int h = 1; h <= 4; ++h) {
                if (h == *failed) continue;
                NodeShare share{h, s.nodes[static_cast<size_t>(h - 1)].blocks[obj][blk]};
                packets.push_back(repair_encode(s.code, share, *failed));
                ev.per_helper_bits[static_cast<size_t>(helper_slot++)] += packets.back().bits.size();
            }
            target.blocks[obj].push_back(repair_decode(s.code, *failed, packets).bits);
        }
    }
    target.live = true;
    ev.total_bits = ev.per_helper_bits[0] + ev.per_helper_bits[1] + ev.per_helper_bits[2];
    if (ev.total_bits != 3ull * static_cast<std::uint64_t>(beta) * s.total_blocks())
        throw std::logic_error("repair ledger does not balance");
    ev.step = ++s.step;
    ++s.repairs_done;
    Event e{Event::Kind::Repair, "", 0, 0, ev.failed_id, s.repairs_done,
            ev.per_helper_bits[0], ev.total_bits};
    s.log.push_back(e);
    return ev;
}

inline std::vector<std::uint8_t> read_object(const ClusterState& s, const std::string& object_id,
                                             const std::set<int>& via) {
    int idx = s.object_index(object_id);
    if (idx < 0) throw std::invalid_argument("unknown object id: " + object_id);
    std::vector<int> live_ids;
    for (int id : via) {
        if (id < 1 || id > 4) throw std::invalid_argument("node id out of range");
        if (s.nodes[static_cast<size_t>(id - 1)].live) live_ids.push_back(id);
    }
    if (live_ids.size() < 3)
        throw std::invalid_argument("need at least 3 live nodes to read");
    live_ids.resize(3);
    const auto& entry = s.catalog[static_cast<size_t>(idx)];
    std::vector<Message> blocks;
    for (std::uint64_t blk = 0; blk < entry.block_count; ++blk) {
        std::vector<NodeShare> shares;
        for (int id : live_ids)
            shares.push_back({id, s.nodes[static_cast<size_t>(id - 1)].blocks[static_cast<size_t>(idx)][blk]});
        auto msg = decode(s.code, shares);
        if (!msg) throw std::runtime_error("inconsistent shares while reading " + object_id);
        blocks.push_back(*msg);
    }
    return deframe_payload(s.code, blocks, entry.length);
}

struct ScenarioObject {
    std::string id;
    std::optional<std::vector<std::uint8_t>> payload;  // explicit bytes
    std::uint64_t size = 0;                            // else: seeded bytes
};

struct Scenario {
    CodeId code = CodeId::INTERIOR;
    std::uint64_t seed = 0;
    std::vector<ScenarioObject> objects;
    std::vector<int> failures;
    bool verify = true;
};

// Text format: one "key value..." per line, '#' comments.
//   code <msr|mbr|interior>
//   seed <uint64>
//   object <id> size <bytes> | object <id> hex <hexbytes>
//   failures [<node>...]
//   verify <true|false>
inline Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    bool have_code = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("scenario line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;
        if (key == "code") {
            std::string v;
            if (!(ss >> v)) fail("missing code id");
            auto c = parse_code(v);
            if (!c) fail("unknown code id: " + v);
            sc.code = *c;
            have_code = true;
        } else if (key == "seed") {
            if (!(ss >> sc.seed)) fail("bad seed");
        } else if (key == "object") {
            ScenarioObject obj;
            std::string mode;
            if (!(ss >> obj.id >> mode)) fail("object needs <id> size|hex <value>");
            if (mode == "size") {
                if (!(ss >> obj.size)) fail("bad object size");
            } else if (mode == "hex") {
                std::string hex;
                if (!(ss >> hex)) fail("missing hex payload");
                if (hex.size() % 2) fail("odd hex payload length");
                std::vector<std::uint8_t> bytes;
                for (size_t i = 0; i < hex.size(); i += 2) {
                    auto bits = hex_to_bits(hex.substr(i, 2), 8);
                    std::uint8_t b = 0;
                    for (int k = 0; k < 8; ++k) b = static_cast<std::uint8_t>((b << 1) | bits[static_cast<size_t>(k)]);
                    bytes.push_back(b);
                }
                obj.payload = std::move(bytes);
            } else {
                fail("object mode must be size or hex");
            }
            sc.objects.push_back(std::move(obj));
        } else if (key == "failures") {
            int id;
            while (ss >> id) sc.failures.push_back(id);
            if (!ss.eof()) fail("bad failure list");
        } else if (key == "verify") {
            std::string v;
            if (!(ss >> v) || (v != "true" && v != "false")) fail("verify must be true|false");
            sc.verify = v == "true";
        } else {
            fail("unknown key: " + key);
        }
    }
    if (!have_code) throw std::invalid_argument("scenario: missing code");
    for (int f : sc.failures)
        if (f < 1 || f > 4) throw std::invalid_argument("scenario: failure node out of range");
    return sc;
}

struct ScenarioResult {
    ClusterState state;
    std::vector<RepairEvent> repairs;
    std::uint64_t total_repair_bits = 0;

    std::string event_log_text() const {
        std::string out;
        for (const auto& e : state.log) out += e.render() + "\n";
        return out;
    }
    std::string bandwidth_csv() const {
        std::ostringstream os;
        os << "repair_index,failed_node,bits_per_helper,total_bits\n";
        for (size_t i = 0; i < repairs.size(); ++i)
            os << i + 1 << ',' << repairs[i].failed_id << ',' << repairs[i].per_helper_bits[0]
               << ',' << repairs[i].total_bits << '\n';
        return os.str();
    }
};

// Deterministic replay: ingest everything, then fail/repair in order,
// verifying exact repair (and payload readback) after every step when
// the scenario asks for it. Any error is rethrown with the 1-based
// step index in the failure list.
inline ScenarioResult run_scenario(const Scenario& sc) {
    ScenarioResult result;
    result.state = init_cluster(sc.code);
    SplitMix64 rng{sc.seed};
    std::vector<std::vector<std::uint8_t>> payloads;
    for (const auto& obj : sc.objects) {
        payloads.push_back(obj.payload ? *obj.payload : rng.bytes(obj.size));
        ingest_object(result.state, obj.id, payloads.back());
    }
    for (size_t i = 0; i < sc.failures.size(); ++i) {
        try {
            ClusterState before = result.state;
            fail_node(result.state, sc.failures[i]);
            auto ev = run_repair(result.state);
            result.total_repair_bits += ev.total_bits;
            if (sc.verify) {
                if (!storage_equal(before, result.state))
                    throw std::runtime_error("repaired state differs from pre-failure state");
                for (size_t o = 0; o < sc.objects.size(); ++o)
                    if (read_object(result.state, sc.objects[o].id, {1, 2, 3, 4}) != payloads[o])
                        throw std::runtime_error("payload readback mismatch");
            }
            result.repairs.push_back(ev);
        } catch (const std::exception& e) {
            throw std::runtime_error("scenario step " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return result;
}

}  // namespace regen

#endif
