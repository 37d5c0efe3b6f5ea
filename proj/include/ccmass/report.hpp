#pragma once

#include <json.hpp>

#include "mass.hpp"
#include "taut.hpp"

// Report emission.  Field names are part of the interface: family, p,
// D_degree, classes[], lhs, rhs, verdict, seed.  Rationals always render
// "num/den", reduced.

namespace ccmass {

using ordered_json = nlohmann::ordered_json;

inline ordered_json class_to_json(const ClassReport& c) {
    ordered_json j;
    j["representative"] = c.rep;
    j["minpoly"] = c.minpoly.str();
    j["field_degree"] = c.field_degree;
    j["orbit_size"] = c.orbit_size;
    j["orbit_minpolys"] = c.orbit_minpolys;
    j["galois_copies"] = c.galois_copies;
    j["alpha"] = c.alpha;
    j["a_number"] = c.a_number;
    j["p_rank"] = c.p_rank;
    j["aut_order"] = c.aut_order;
    if (c.m_x) j["m_x"] = *c.m_x;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline ordered_json report_to_json(const MassReport& r) {
    ordered_json j;
    j["family"] = r.family;
    j["p"] = r.p;
    j["D_degree"] = r.D_degree;
    j["classes"] = ordered_json::array();
    for (auto& c : r.classes) j["classes"].push_back(class_to_json(c));
    j["lhs"] = r.lhs.str();
    j["rhs"] = r.rhs.str();
    j["verdict"] = r.verdict;
    j["seed"] = r.seed;
    if (!r.boundary.empty()) {
        j["boundary_contributions"] = ordered_json::array();
        for (auto& b : r.boundary) {
            ordered_json jb;
            jb["location"] = b.location;
            jb["alpha"] = b.alpha;
            jb["weight"] = b.weight.str();
            jb["note"] = b.note;
            j["boundary_contributions"].push_back(jb);
        }
    }
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    if (r.iko) {
        ordered_json ji;
        ji["eps1"] = r.iko->eps1;
        ji["eps2"] = r.iko->eps2;
        ji["eps3"] = r.iko->eps3;
        if (r.family == "ikoSecond") {
            ji["k"] = r.iko->k;
            ji["eps"] = r.iko->eps;
        }
        ji["N"] = r.iko->N;
        if (r.family == "ikoB") {
            ji["R6"] = r.iko->R6;
            ji["R12"] = r.iko->R12;
        } else {
            ji["R4"] = r.iko->R4;
            ji["R12"] = r.iko->R12;
            ji["R24"] = r.iko->R24;
        }
        ji["Rinf"] = r.iko->Rinf;
        ji["mass"] = r.iko->mass.str();
        j["iko"] = ji;
    }
    return j;
}

// one row per class
inline std::string report_to_tsv(const MassReport& r) {
    std::string s =
        "family\tp\tclass\trepresentative\tfield_degree\torbit_size\tgalois_copies\talpha\t"
        "a_number\tp_rank\taut_order\n";
    long idx = 0;
    for (auto& c : r.classes) {
        s += r.family + "\t" + std::to_string(r.p) + "\t" + std::to_string(idx++) + "\t" + c.rep +
             "\t" + std::to_string(c.field_degree) + "\t" + std::to_string(c.orbit_size) + "\t" +
             std::to_string(c.galois_copies) + "\t" + std::to_string(c.alpha) + "\t" +
             std::to_string(c.a_number) + "\t" + std::to_string(c.p_rank) + "\t" +
             std::to_string(c.aut_order) + "\n";
    }
    return s;
}

inline std::string report_pretty(const MassReport& r) {
    std::string s;
    s += "family " + r.family + "  p=" + std::to_string(r.p) +
         "  deg D=" + std::to_string(r.D_degree) + "\n";
    for (auto& c : r.classes) {
        s += "  class " + c.rep + "  m=" + std::to_string(c.field_degree) +
             " orbit=" + std::to_string(c.orbit_size) + " copies=" +
             std::to_string(c.galois_copies) + "  alpha=" + std::to_string(c.alpha) +
             " a=" + std::to_string(c.a_number) + " s=" + std::to_string(c.p_rank) +
             " #Aut(X,tau)=" + std::to_string(c.aut_order);
        if (!c.note.empty()) s += "  [" + c.note + "]";
        s += "\n";
    }
    for (auto& b : r.boundary)
        s += "  boundary " + b.location + "  weight=" + b.weight.str() + "  (" + b.note + ")\n";
    for (auto& w : r.warnings) s += "  warning: " + w + "\n";
    s += "  lhs=" + r.lhs.str() + "  rhs=" + r.rhs.str() + "  verdict=" + r.verdict + "\n";
    return s;
}

// matrix dump for golden files: entries as coefficient lists in t
inline ordered_json cartier_to_json(const CartierMatrix& cm) {
    ordered_json j;
    j["p"] = cm.p;
    j["d"] = cm.d;
    j["g"] = cm.g;
    if (cm.it) j["family"] = cm.it->str();
    j["square"] = cm.square;
    j["basis"] = ordered_json::array();
    for (auto& b : cm.basis) {
        ordered_json jb;
        jb["s"] = b.s;
        jb["count"] = b.count;
        jb["vanishing"] = std::vector<long>(b.m.begin(), b.m.end());
        j["basis"].push_back(jb);
    }
    j["blocks"] = ordered_json::array();
    for (auto& blk : cm.blocks) {
        ordered_json jb;
        jb["s_src"] = blk.s_src;
        jb["s_dst"] = blk.s_dst;
        jb["e"] = blk.e;
        jb["rows"] = blk.rows;
        jb["cols"] = blk.cols;
        auto entries = ordered_json::array();
        for (auto& row : blk.a) {
            auto jrow = ordered_json::array();
            for (auto& ent : row) jrow.push_back(ent.c);
            entries.push_back(jrow);
        }
        jb["entries"] = entries;
        j["blocks"].push_back(jb);
    }
    if (auto D = det_cartier(cm)) j["D"] = D->c;
    return j;
}

inline ordered_json moonen_to_json(const std::vector<MoonenEntry>& rows, u64 p) {
    ordered_json j;
    j["p"] = p;
    j["rows"] = ordered_json::array();
    for (auto& e : rows) {
        ordered_json je;
        je["label"] = e.label;
        je["family"] = e.it.str();
        je["g"] = e.g;
        je["deg_lambda1"] = e.deg_lambda1.str();
        je["delta"] = e.delta;
        je["z"] = e.z;
        je["a_nu"] = e.a_nu;
        je["n_rate"] = e.n_rate.str();
        je["mu"] = e.mu.str();
        je["mu_applicable"] = e.mu_applicable;
        j["rows"].push_back(je);
    }
    return j;
}

inline std::string moonen_to_tsv(const std::vector<MoonenEntry>& rows) {
    std::string s = "label\tfamily\tg\tdeg_lambda1\tdelta\tz\ta_nu\tn_rate\tmu\tmu_applicable\n";
    for (auto& e : rows) {
        s += e.label + "\t" + e.it.str() + "\t" + std::to_string(e.g) + "\t" +
             e.deg_lambda1.str() + "\t" + std::to_string(e.delta) + "\t" + std::to_string(e.z) +
             "\t" + std::to_string(e.a_nu) + "\t" + e.n_rate.str() + "\t" + e.mu.str() + "\t" +
             (e.mu_applicable ? "yes" : "no") + "\n";
    }
    return s;
}

}  // namespace ccmass
