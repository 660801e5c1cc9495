// Command-line front end: codec round-trips, scenario simulation,
// rate-region export, and certificate extraction/verification.
//
// Exit codes: 0 success, 1 verification failure, 2 usage, 3 I/O or
// parse error. All stdout is byte-stable for fixed inputs.

#include "CLI11.hpp"

#include "regen/cluster.hpp"
#include "regen/codes.hpp"
#include "regen/entropy_lp.hpp"
#include "regen/region.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

int cmd_code_roundtrip(const std::string& code_str, bool exhaustive) {
    auto code = regen::parse_code(code_str);
    if (!code) {
        std::cerr << "error: unknown code id '" << code_str
                  << "' (expected msr, mbr, or interior)\n";
        return kUsage;
    }
    auto p = regen::code_parameters(*code);
    std::uint64_t total = 1ull << p.B;
    std::uint64_t count = exhaustive ? total : std::min<std::uint64_t>(total, 16);
    std::uint64_t decode_pass = 0, decode_fail = 0, repair_pass = 0, repair_fail = 0;
    for (std::uint64_t m = 0; m < count; ++m) {
        regen::Message msg;
        msg.bits.resize(static_cast<size_t>(p.B));
        for (int k = 0; k < p.B; ++k)
            msg.bits[static_cast<size_t>(k)] = static_cast<std::uint8_t>((m >> k) & 1);
        auto shares = regen::encode(*code, msg);
        for (int drop = 1; drop <= 4; ++drop) {
            std::vector<regen::NodeShare> kept;
            for (int i = 1; i <= 4; ++i)
                if (i != drop) kept.push_back(shares[static_cast<size_t>(i - 1)]);
            auto got = regen::decode(*code, kept);
            if (got && got->bits == msg.bits)
                ++decode_pass;
            else
                ++decode_fail;
        }
        for (int failed = 1; failed <= 4; ++failed) {
            std::vector<regen::RepairPacket> packets;
            bool width_ok = true;
            for (int h = 1; h <= 4; ++h) {
                if (h == failed) continue;
                packets.push_back(
                    regen::repair_encode(*code, shares[static_cast<size_t>(h - 1)], failed));
                width_ok = width_ok && static_cast<int>(packets.back().bits.size()) == p.beta;
            }
            auto rebuilt = regen::repair_decode(*code, failed, packets);
            if (width_ok && rebuilt.bits == shares[static_cast<size_t>(failed - 1)].bits)
                ++repair_pass;
            else
                ++repair_fail;
        }
    }
    std::cout << "code: " << regen::code_name(*code) << "\n"
              << "parameters: n=" << p.n << " k=" << p.k << " d=" << p.d << " B=" << p.B
              << " alpha=" << p.alpha << " beta=" << p.beta << "\n"
              << "normalized point: alpha_bar=" << regen::format_rat(p.alpha_bar)
              << " beta_bar=" << regen::format_rat(p.beta_bar) << "\n"
              << "messages checked: " << count << " of " << total << "\n"
              << "decode checks: " << decode_pass << " passed, " << decode_fail << " failed\n"
              << "repair checks: " << repair_pass << " passed, " << repair_fail << " failed\n"
              << "result: " << ((decode_fail | repair_fail) == 0 ? "pass" : "fail") << "\n";
    return (decode_fail | repair_fail) == 0 ? kOk : kFail;
}

int cmd_sim_run(const std::string& scenario_path, const std::string& out_dir) {
    auto text = read_file(scenario_path);
    if (!text) {
        std::cerr << "error: cannot read scenario file '" << scenario_path << "'\n";
        return kIo;
    }
    regen::Scenario sc;
    try {
        sc = regen::parse_scenario(*text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    regen::ScenarioResult result;
    try {
        result = regen::run_scenario(sc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    auto events_path = (std::filesystem::path(out_dir) / "events.log").string();
    auto bandwidth_path = (std::filesystem::path(out_dir) / "bandwidth.csv").string();
    if (!write_file(events_path, result.event_log_text()) ||
        !write_file(bandwidth_path, result.bandwidth_csv())) {
        std::cerr << "error: cannot write outputs under '" << out_dir << "'\n";
        return kIo;
    }
    std::cout << "code: " << regen::code_name(sc.code) << "\n"
              << "objects: " << sc.objects.size() << "\n"
              << "blocks: " << result.state.total_blocks() << "\n"
              << "repairs: " << result.repairs.size() << "\n"
              << "total repair bits: " << result.total_repair_bits << "\n"
              << "wrote: events.log, bandwidth.csv\n";
    return kOk;
}

int cmd_region(const std::string& which, const std::string& out_dir, bool gap) {
    regen::Region2D region = which == "exact" ? regen::exact_region() : regen::cutset_region();
    auto verts = regen::vertices(region);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    auto half_path = (std::filesystem::path(out_dir) / "halfspaces.csv").string();
    auto vert_path = (std::filesystem::path(out_dir) / "vertices.csv").string();
    if (!write_file(half_path, regen::export_region(region, "halfspaces")) ||
        !write_file(vert_path, regen::export_region(region, "vertices"))) {
        std::cerr << "error: cannot write outputs under '" << out_dir << "'\n";
        return kIo;
    }
    std::cout << "region: " << which << "\n"
              << "halfspaces: " << region.halfspaces.size() << "\n"
              << "vertices: " << verts.size() << "\n";
    for (const auto& v : verts)
        std::cout << "vertex: " << regen::format_rat(v.x) << "," << regen::format_rat(v.y)
                  << "\n";
    if (gap) {
        auto g = regen::max_gap(regen::cutset_region(), regen::exact_region());
        std::cout << "gap witness: " << regen::format_rat(g.witness.x) << ","
                  << regen::format_rat(g.witness.y) << "\n"
                  << "violated: " << regen::format_rat(g.violated.a) << " alpha_bar + "
                  << regen::format_rat(g.violated.b) << " beta_bar >= "
                  << regen::format_rat(g.violated.c) << "\n"
                  << "raw violation: " << regen::format_rat(g.raw_violation) << "\n"
                  << "normalized gap: " << regen::format_rat(g.gap) << "\n";
    }
    std::cout << "wrote: halfspaces.csv, vertices.csv\n";
    return kOk;
}

int cmd_prove(const std::string& a_str, const std::string& b_str, const std::string& c_str,
              const std::string& out_path) {
    regen::Rat a, b, c, optimum;
    try {
        a = regen::parse_rat(a_str);
        b = regen::parse_rat(b_str);
        c = regen::parse_rat(c_str);
        if (sgn(c) < 0) throw std::invalid_argument("constant must be nonnegative");
        optimum = regen::min_objective(a, b);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    std::cout << "optimum: " << regen::format_rat(optimum) << "\n";
    if (c > optimum) {
        std::cout << "refused: " << regen::format_rat(c)
                  << " exceeds the provable optimum\n";
        return kFail;
    }
    auto cert = regen::sparsify_certificate(regen::extract_certificate(a, b, c));
    auto vr = regen::verify_certificate(cert);
    std::cout << "certificate: " << cert.lines.size() << " lines\n"
              << "verified: " << (vr.ok ? "true" : "false") << "\n";
    if (!vr.ok) {
        std::cout << "reason: " << vr.diagnostic << "\n";
        return kFail;
    }
    if (!write_file(out_path, regen::render_certificate(cert))) {
        std::cerr << "error: cannot write certificate to '" << out_path << "'\n";
        return kIo;
    }
    std::cout << "wrote: " << out_path << "\n";
    return kOk;
}

int cmd_verify(const std::string& cert_path) {
    auto text = read_file(cert_path);
    if (!text) {
        std::cerr << "error: cannot read certificate file '" << cert_path << "'\n";
        return kIo;
    }
    regen::ProofCertificate cert;
    try {
        cert = regen::parse_certificate(*text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    std::cout << "target: " << regen::format_rat(cert.a) << " alpha + "
              << regen::format_rat(cert.b) << " beta - " << regen::format_rat(cert.c)
              << " B >= 0\n"
              << "lines: " << cert.lines.size() << "\n";
    auto vr = regen::verify_certificate(cert);
    std::cout << "verified: " << (vr.ok ? "true" : "false") << "\n";
    if (!vr.ok) {
        std::cout << "reason: " << vr.diagnostic << "\n";
        return kFail;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(4,3,3) exact-repair regenerating codes: codec, simulator, region, prover"};
    app.require_subcommand(1);

    auto* rt = app.add_subcommand("code-roundtrip",
                                  "encode/decode/repair every message of a code");
    std::string rt_code;
    bool rt_exhaustive = false;
    rt->add_option("--code", rt_code, "code id: msr, mbr, or interior")->required();
    rt->add_flag("--exhaustive", rt_exhaustive, "check all 2^B messages instead of 16");

    auto* sim = app.add_subcommand("sim-run", "replay a failure scenario on a 4-node cluster");
    std::string sim_scenario, sim_out_dir = ".";
    sim->add_option("--scenario", sim_scenario, "scenario file path")->required();
    sim->add_option("--out-dir", sim_out_dir, "directory for events.log and bandwidth.csv");

    auto* reg = app.add_subcommand("region", "export a storage/bandwidth trade-off region");
    std::string reg_which, reg_out_dir = ".";
    bool reg_gap = false;
    reg->add_option("--which", reg_which, "cutset or exact")
        ->required()
        ->check(CLI::IsMember({"cutset", "exact"}));
    reg->add_option("--out-dir", reg_out_dir, "directory for halfspaces.csv and vertices.csv");
    reg->add_flag("--gap", reg_gap, "also report the largest cutset-vs-exact gap");

    auto* prove = app.add_subcommand("prove",
                                     "extract a dual certificate for a*alpha + b*beta >= c");
    std::string prove_a, prove_b, prove_c, prove_out = "certificate.txt";
    prove->add_option("--a", prove_a, "alpha coefficient as p/q")->required();
    prove->add_option("--b", prove_b, "beta coefficient as p/q")->required();
    prove->add_option("--c", prove_c, "bound constant as p/q")->required();
    prove->add_option("--out", prove_out, "certificate output path");

    auto* verify = app.add_subcommand("verify", "re-check a certificate from its text alone");
    std::string verify_cert;
    verify->add_option("--cert", verify_cert, "certificate file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (rt->parsed()) return cmd_code_roundtrip(rt_code, rt_exhaustive);
        if (sim->parsed()) return cmd_sim_run(sim_scenario, sim_out_dir);
        if (reg->parsed()) return cmd_region(reg_which, reg_out_dir, reg_gap);
        if (prove->parsed()) return cmd_prove(prove_a, prove_b, prove_c, prove_out);
        if (verify->parsed()) return cmd_verify(verify_cert);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
