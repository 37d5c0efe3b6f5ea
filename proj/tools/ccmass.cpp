#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "ccmass/oracle.hpp"
#include "ccmass/report.hpp"

// Command-line front end: invariants | verify | moonen | iko | oracle-check.
// Exit code 0 iff every verdict in the run is "equal" (or the engine said
// up front the comparison does not apply); nonzero otherwise.

using namespace ccmass;

namespace {

std::vector<u64> primes_in(u64 lo, u64 hi) {
    std::vector<u64> ps;
    for (u64 p = lo; p <= hi; ++p)
        if (is_prime_u64(p)) ps.push_back(p);
    return ps;
}

unsigned default_jobs() {
    if (const char* env = std::getenv("CCMASS_JOBS")) {
        long v = std::atol(env);
        if (v >= 1) return (unsigned)v;
    }
    return 1;
}

struct Emitter {
    std::string format = "pretty";
    std::string out_dir;

    void emit(const MassReport& rep) const {
        std::string body;
        if (format == "json")
            body = report_to_json(rep).dump(2) + "\n";
        else if (format == "tsv")
            body = report_to_tsv(rep);
        else
            body = report_pretty(rep);
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::string name = rep.family;
            for (auto& ch : name)
                if (ch == ':' || ch == ',' || ch == '/') ch = '_';
            std::ofstream os(out_dir + "/verify_" + name + "_p" + std::to_string(rep.p) +
                             (format == "json" ? ".json" : format == "tsv" ? ".tsv" : ".txt"));
            os << body;
        } else {
            std::cout << body;
        }
    }
};

bool verdict_ok(const MassReport& r) {
    return r.verdict == "equal" || r.verdict == "not-applicable" || r.verdict == "interior-only";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact mass-formula computations for one-dimensional families of cyclic covers"};
    app.set_help_flag("--help", "print help");  // frees -h / --h for the hyperelliptic input
    app.require_subcommand(1);
    app.fallthrough();  // allow the global options after a subcommand name

    u64 seed = 0x00c0ffee;
    unsigned jobs = default_jobs();
    std::string format = "pretty";
    app.add_option("--seed", seed, "seed for the equal-degree splitting stream");
    app.add_option("--jobs", jobs, "parallel workers for prime sweeps (env CCMASS_JOBS)");
    app.add_option("--format", format, "output format: json | tsv | pretty");

    // invariants
    auto* inv = app.add_subcommand("invariants", "genus, signature, delta, deg lambda_1, mu(p)");
    std::string inv_spec;
    inv->add_option("spec", inv_spec, "inertia type, e.g. 3:1,1,2,2")->required();

    // verify
    auto* ver = app.add_subcommand("verify", "run both sides of the mass formula and compare");
    std::string ver_spec;
    u64 ver_p = 0;
    std::string ver_range;
    std::string ver_h;
    std::string out_dir;
    bool allow_interior = false;
    unsigned marked_label = 0;
    ver->add_option("spec", ver_spec, "family: d:a1,a2,a3,a4 | hyperelliptic | ikoB | ikoSecond")
        ->required();
    ver->add_option("-p,--prime", ver_p, "prime p");
    ver->add_option("--p-range", ver_range, "inclusive prime range lo..hi");
    ver->add_option("--h", ver_h, "hyperelliptic h coefficients c0,c1,... (ascending)");
    ver->add_option("--out-dir", out_dir, "write one report file per prime");
    ver->add_flag("--allow-interior-only", allow_interior,
                  "run 4-point families at p != 1 mod d (interior sum only)");
    ver->add_option("--marked-label", marked_label, "marked branch label for genus-1 families");

    // moonen
    auto* moo = app.add_subcommand("moonen", "the 14 one-dimensional special families");
    u64 moo_p = 0;
    moo->add_option("-p,--prime", moo_p, "prime for the mu column")->required();

    // iko
    auto* iko = app.add_subcommand("iko", "genus-2 reproductions with boundary terms");
    std::string iko_case;
    u64 iko_p = 0;
    iko->add_option("case", iko_case, "caseB | caseSecond")->required();
    iko->add_option("-p,--prime", iko_p, "prime")->required();

    // oracle-check
    auto* orc = app.add_subcommand("oracle-check",
                                   "compare the symbolic matrix against the brute-force operator");
    std::string orc_spec;
    u64 orc_p = 0;
    unsigned orc_count = 3;
    bool orc_full = false;
    orc->add_option("spec", orc_spec, "inertia type")->required();
    orc->add_option("-p,--prime", orc_p, "prime")->required();
    orc->add_option("--fibers", orc_count, "number of fibers to test");
    orc->add_flag("--full-expansion", orc_full,
                  "also re-derive every windowed coefficient from the expanded power");
    bool orc_dump = false;
    orc->add_flag("--dump-matrix", orc_dump, "print the symbolic matrix and D(t) as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*inv) {
            InertiaType it = InertiaType::parse(inv_spec);
            auto [delta, set] = delta_degree(it);
            (void)set;
            ordered_json j;
            j["family"] = it.str();
            j["genus"] = genus(it);
            auto f = signature(it);
            j["signature"] = std::vector<long>(f.begin() + 1, f.end());
            j["delta"] = delta;
            if (it.n() == 4) {
                Rat dl = deg_lambda1_4pt(it);
                j["deg_lambda1"] = dl.str();
                Rat mu_coeff = dl / Rat(delta);
                j["mu"] = "(p-1)*" + mu_coeff.str();
            }
            if (format == "json")
                std::cout << j.dump(2) << "\n";
            else {
                std::cout << "family " << it.str() << "\n  genus " << j["genus"] << "\n  signature (";
                for (std::size_t i = 1; i < f.size(); ++i)
                    std::cout << (i > 1 ? "," : "") << f[i];
                std::cout << ")\n  delta " << delta << "\n";
                if (it.n() == 4)
                    std::cout << "  deg lambda_1 " << std::string(j["deg_lambda1"]) << "\n  mu "
                              << std::string(j["mu"]) << "\n";
            }
            return 0;
        }

        if (*ver) {
            RunOptions opts;
            opts.seed = seed;
            opts.allow_interior_only = allow_interior;
            if (marked_label) opts.marked_label = marked_label;
            std::string family = ver_spec;
            if (ver_spec == "hyperelliptic") {
                CCMASS_CHECK(!ver_h.empty(), "hyperelliptic verify needs --h c0,c1,...");
                family = "hyp:" + ver_h;
            }
            std::vector<u64> ps;
            if (!ver_range.empty()) {
                auto dots = ver_range.find("..");
                CCMASS_CHECK(dots != std::string::npos, "--p-range expects lo..hi");
                ps = primes_in(std::stoull(ver_range.substr(0, dots)),
                               std::stoull(ver_range.substr(dots + 2)));
            } else {
                CCMASS_CHECK(ver_p != 0, "need -p or --p-range");
                ps = {ver_p};
            }
            Emitter em{format, out_dir};
            std::vector<MassReport> reports(ps.size());
            unsigned width = std::max(1u, jobs);
            for (std::size_t base = 0; base < ps.size(); base += width) {
                std::vector<std::future<MassReport>> batch;
                for (std::size_t i = base; i < std::min(ps.size(), base + width); ++i)
                    batch.push_back(std::async(std::launch::async,
                                               [&, i] { return verify_family(family, ps[i], opts); }));
                for (std::size_t i = 0; i < batch.size(); ++i) reports[base + i] = batch[i].get();
            }
            bool all_ok = true;
            for (auto& rep : reports) {
                em.emit(rep);
                all_ok = all_ok && verdict_ok(rep);
            }
            if (ps.size() > 1) {
                ordered_json agg;
                agg["family"] = family;
                agg["primes"] = ps;
                agg["all_equal"] = all_ok;
                agg["verdicts"] = ordered_json::array();
                for (auto& rep : reports) agg["verdicts"].push_back(rep.verdict);
                if (!out_dir.empty()) {
                    std::ofstream os(out_dir + "/aggregate.json");
                    os << agg.dump(2) << "\n";
                }
                std::cout << "sweep: " << ps.size() << " primes, "
                          << (all_ok ? "all verdicts ok" : "MISMATCH PRESENT") << "\n";
            }
            return all_ok ? 0 : 1;
        }

        if (*moo) {
            auto rows = moonen_table(moo_p);
            if (format == "json")
                std::cout << moonen_to_json(rows, moo_p).dump(2) << "\n";
            else
                std::cout << moonen_to_tsv(rows);
            return 0;
        }

        if (*iko) {
            RunOptions opts;
            opts.seed = seed;
            MassReport rep;
            if (iko_case == "caseB")
                rep = iko_genus2_caseB(iko_p, opts);
            else if (iko_case == "caseSecond")
                rep = iko_genus2_caseSecond(iko_p, opts);
            else
                throw std::runtime_error("iko case must be caseB or caseSecond");
            Emitter em{format, out_dir};
            em.emit(rep);
            return verdict_ok(rep) ? 0 : 1;
        }

        if (*orc) {
            InertiaType it = InertiaType::parse(orc_spec);
            CCMASS_CHECK(orc_p > it.d, "oracle-check drives the symbolic path; needs p > d");
            CartierMatrix cm = cartier_superelliptic_4pt(it, orc_p, orc_full);
            if (orc_full) std::cout << "windowed extraction matches the full expansion\n";
            if (orc_dump) std::cout << cartier_to_json(cm).dump(2) << "\n";
            SplitMix64 rng(seed);
            FqCtxPtr k = FqCtx::prime_field(orc_p);
            unsigned tested = 0;
            while (tested < orc_count) {
                u64 t0 = 2 + rng.below(orc_p > 3 ? orc_p - 3 : 1);
                if (t0 == 0 || t0 == 1) continue;
                FqElem tv = FqElem::from_uint(k, t0);
                PolyFq fq(k);
                {
                    FptPoly fsym = FptPoly::x_power(orc_p, it.a[0]);
                    for (unsigned i = 0; i < it.a[1]; ++i) fsym = fsym * FptPoly::x_minus(orc_p, 1, 0);
                    for (unsigned i = 0; i < it.a[2]; ++i) fsym = fsym * FptPoly::x_minus(orc_p, 0, 1);
                    fq = PolyFq::from_fp(k, fsym.specialize_t(t0));
                }
                CartierOracle oc(it.d, fq);
                bool ok = true;
                for (auto& b : cm.basis) {
                    for (long col = 0; col < b.count; ++col) {
                        auto coords = oracle_cartier_coords(oc, cm, tv, b.s, col);
                        const CartierBlock* blk = nullptr;
                        for (auto& bb : cm.blocks)
                            if (bb.s_src == b.s) blk = &bb;
                        for (long r2 = 0; r2 < blk->rows; ++r2) {
                            FqElem want = eval_at(blk->a[r2][col], tv).frob_inv();
                            if (!(coords[(std::size_t)r2] == want)) ok = false;
                        }
                    }
                }
                std::cout << "t = " << t0 << ": " << (ok ? "oracle agrees" : "MISMATCH") << "\n";
                if (!ok) return 1;
                ++tested;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
