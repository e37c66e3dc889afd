#pragma once

// File formats: order description files (JSON), decomposition certificates
// (JSON), census output (CSV and JSON), golden reference tables (CSV), and
// the on-disk census store.  Rationals always travel as strings "p/q".

#include "census.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qorder {

using ordered_json = nlohmann::ordered_json;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- order files ----------------------------------------------------------------

// {
//   "dim": 3 | 4 | 5,
//   "algebra": {"d": "3"} or {"a": "-1", "b": "-1"},
//   "involution": "none" | "orthogonal-ij",       (dim 4: "orthogonal-ij")
//   "basis": [["1","0"], ["0","1"]]               (rows of rational strings)
// }
inline OrderLattice order_from_json(const ordered_json& j) {
    if (!j.contains("dim")) throw parse_error("order file: missing field 'dim'");
    int dim = j.at("dim").get<int>();
    if (dim != 3 && dim != 4 && dim != 5) throw parse_error("order file: 'dim' must be 3, 4 or 5");
    if (!j.contains("algebra")) throw parse_error("order file: missing field 'algebra'");
    const auto& ja = j.at("algebra");
    AlgebraDescriptor alg;
    if (dim == 3) {
        if (!ja.contains("d")) throw parse_error("order file: algebra.d required for dim 3");
        alg = AlgebraDescriptor::imaginary_quadratic(parse_rat(ja.at("d").get<std::string>()));
    } else {
        if (!ja.contains("a") || !ja.contains("b"))
            throw parse_error("order file: algebra.a and algebra.b required");
        alg = AlgebraDescriptor::quaternion(parse_rat(ja.at("a").get<std::string>()),
                                            parse_rat(ja.at("b").get<std::string>()));
    }
    std::optional<InvolutionDescriptor> inv;
    std::string inv_str = j.value("involution", dim == 4 ? "orthogonal-ij" : "none");
    if (inv_str == "orthogonal-ij") {
        if (dim != 4) throw parse_error("order file: involution requires dim 4");
        inv = InvolutionDescriptor::orthogonal_ij(alg);
    } else if (inv_str != "none") {
        throw parse_error("order file: involution must be 'none' or 'orthogonal-ij'");
    }
    if (dim == 4 && !inv) throw parse_error("order file: dim 4 requires involution 'orthogonal-ij'");
    if (!j.contains("basis")) throw parse_error("order file: missing field 'basis'");
    QMat rows;
    size_t want = ambient_dim(alg);
    size_t rix = 0;
    for (const auto& jr : j.at("basis")) {
        QVec row;
        size_t cix = 0;
        for (const auto& cell : jr) {
            try {
                row.push_back(parse_rat(cell.get<std::string>()));
            } catch (const std::exception& e) {
                throw parse_error("order file: basis[" + std::to_string(rix) + "][" +
                                  std::to_string(cix) + "]: " + e.what());
            }
            ++cix;
        }
        if (row.size() != want)
            throw parse_error("order file: basis row " + std::to_string(rix) + " needs " +
                              std::to_string(want) + " entries");
        rows.push_back(std::move(row));
        ++rix;
    }
    return order_from_rows(alg, inv, rows);  // surfaces named validation errors
}

inline ordered_json order_to_json(const OrderLattice& O) {
    ordered_json j;
    j["dim"] = O.dim();
    if (O.alg.is_quadratic()) j["algebra"] = {{"d", rat_str(-O.alg.b)}};
    else j["algebra"] = {{"a", rat_str(O.alg.a)}, {"b", rat_str(O.alg.b)}};
    j["involution"] = O.involution ? "orthogonal-ij" : "none";
    ordered_json rows = ordered_json::array();
    for (auto& r : O.lattice.basis) {
        ordered_json row = ordered_json::array();
        for (auto& x : r) row.push_back(rat_str(x));
        rows.push_back(row);
    }
    j["basis"] = rows;
    return j;
}

inline OrderLattice parse_order_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open order file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return order_from_json(j);
}

// --- matrices and certificates ----------------------------------------------------

inline QuatElt elt_from_json(const AlgebraDescriptor& alg, const ordered_json& j) {
    QVec v;
    for (const auto& cell : j) v.push_back(parse_rat(cell.get<std::string>()));
    if (v.size() != ambient_dim(alg)) throw parse_error("element coordinate count mismatch");
    return vec_to_elt(alg, v);
}

inline ordered_json elt_to_json(const QuatElt& e) {
    ordered_json out = ordered_json::array();
    for (auto& x : elt_to_vec(e)) out.push_back(rat_str(x));
    return out;
}

inline Mat2 mat2_from_json(const AlgebraDescriptor& alg, const ordered_json& j) {
    for (const char* k : {"a", "b", "c", "d"})
        if (!j.contains(k)) throw parse_error(std::string("matrix file: missing entry '") + k + "'");
    return {elt_from_json(alg, j.at("a")), elt_from_json(alg, j.at("b")),
            elt_from_json(alg, j.at("c")), elt_from_json(alg, j.at("d"))};
}

inline ordered_json mat2_to_json(const Mat2& M) {
    ordered_json j;
    j["a"] = elt_to_json(M.a);
    j["b"] = elt_to_json(M.b);
    j["c"] = elt_to_json(M.c);
    j["d"] = elt_to_json(M.d);
    return j;
}

inline ordered_json certificate_to_json(const DecompositionCertificate& cert) {
    ordered_json j;
    j["sl_conjugation_applied"] = cert.sl_conjugation_applied;
    ordered_json fs = ordered_json::array();
    for (auto& f : cert.factors) fs.push_back(mat2_to_json(f));
    j["factors"] = fs;
    return j;
}

inline DecompositionCertificate certificate_from_json(const AlgebraDescriptor& alg,
                                                      const ordered_json& j) {
    DecompositionCertificate cert;
    cert.sl_conjugation_applied = j.value("sl_conjugation_applied", false);
    for (const auto& jf : j.at("factors")) cert.factors.push_back(mat2_from_json(alg, jf));
    return cert;
}

// --- census records -----------------------------------------------------------------

inline ordered_json record_to_json(const CensusRecord& rec) {
    ordered_json j;
    j["order"] = order_to_json(rec.order);
    j["classification"] = order_class_name(rec.cls);
    j["maximal"] = rec.maximal;
    j["anomaly"] = rec.anomaly;
    if (rec.anomaly) j["anomaly_detail"] = rec.anomaly_detail;
    j["disc_H"] = rec.disc_H.get_str();
    j["inv_disc"] = rec.m.get_str();
    j["red_disc"] = rec.red_disc.get_str();
    j["mu_sq"] = rat_str(rec.mu_sq);
    ordered_json holes = ordered_json::array();
    for (auto& h : rec.holes_norm1) {
        ordered_json hv = ordered_json::array();
        for (auto& x : h) hv.push_back(rat_str(x));
        holes.push_back(hv);
    }
    j["deep_holes"] = holes;
    ordered_json sups = ordered_json::array();
    for (auto& s : rec.hole_superorders) sups.push_back(order_to_json(s));
    j["hole_superorders"] = sups;
    return j;
}

inline CensusRecord record_from_json(const ordered_json& j) {
    CensusRecord rec;
    rec.order = order_from_json(j.at("order"));
    std::string cls = j.at("classification").get<std::string>();
    rec.cls = cls == "euclidean-by-norm" ? OrderClass::EuclideanByNorm
              : cls == "semi-euclidean"  ? OrderClass::SemiEuclidean
                                         : OrderClass::NotSemiEuclidean;
    rec.maximal = j.at("maximal").get<bool>();
    rec.anomaly = j.at("anomaly").get<bool>();
    if (rec.anomaly) rec.anomaly_detail = j.value("anomaly_detail", "");
    rec.disc_H = Int(j.at("disc_H").get<std::string>());
    rec.m = Int(j.at("inv_disc").get<std::string>());
    rec.red_disc = Int(j.at("red_disc").get<std::string>());
    rec.mu_sq = parse_rat(j.at("mu_sq").get<std::string>());
    for (const auto& jh : j.at("deep_holes")) {
        QVec h;
        for (const auto& cell : jh) h.push_back(parse_rat(cell.get<std::string>()));
        rec.holes_norm1.push_back(std::move(h));
    }
    for (const auto& js : j.at("hole_superorders"))
        rec.hole_superorders.push_back(order_from_json(js));
    // recompute the full hole report (cheap relative to classification)
    rec.holes = covering_radius(euclidean_target_lattice(rec.order));
    return rec;
}

// --- on-disk census store -------------------------------------------------------------

inline std::string fnv64_hex(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Directory of JSON records keyed by a hash of the canonical order key, so
// census re-runs skip already classified candidates.
class DirectoryStore : public CensusStoreIface {
  public:
    explicit DirectoryStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }
    std::optional<CensusRecord> load(const std::string& key) override {
        auto path = dir_ / (fnv64_hex(key) + ".json");
        std::ifstream in(path);
        if (!in) return std::nullopt;
        try {
            ordered_json j;
            in >> j;
            if (j.value("store_version", 0) != kVersion) return std::nullopt;
            if (j.value("key", "") != key) return std::nullopt;  // hash collision guard
            return record_from_json(j.at("record"));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    void save(const std::string& key, const CensusRecord& rec) override {
        ordered_json j;
        j["store_version"] = kVersion;
        j["key"] = key;
        j["record"] = record_to_json(rec);
        std::ofstream out(dir_ / (fnv64_hex(key) + ".json"));
        out << j.dump(1) << "\n";
    }

  private:
    static constexpr int kVersion = 1;
    std::filesystem::path dir_;
};

// --- golden tables ----------------------------------------------------------------------

// CSV schema (one header line, then one row per order):
//   dim,algebra,basis,maximal,semi
// with algebra "d=3" or "a=-1 b=-2 m=2" and basis rows '|'-separated,
// coordinates space-separated rational strings.
struct GoldenRow {
    int dim = 0;
    AlgebraDescriptor alg;
    Int m = 0;
    QMat basis;
    bool maximal = false;
    bool semi = false;
};

// Hole-table CSV schema:
//   dim,algebra,basis,hole,superorder
// one row per (order, hole class); superorder may be empty.
struct GoldenHoleRow {
    int dim = 0;
    AlgebraDescriptor alg;
    Int m = 0;
    QMat basis;
    QVec hole;
    QMat superorder;  // empty when the reference leaves the cell blank
};

namespace io_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline QMat parse_basis(const std::string& s) {
    QMat rows;
    for (auto& rstr : split(s, '|')) {
        QVec row;
        std::istringstream iss(rstr);
        std::string cell;
        while (iss >> cell) row.push_back(parse_rat(cell));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string basis_str(const QMat& rows) {
    std::string s;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i) s += "|";
        for (size_t j = 0; j < rows[i].size(); ++j) {
            if (j) s += " ";
            s += rat_str(rows[i][j]);
        }
    }
    return s;
}

inline std::pair<AlgebraDescriptor, Int> parse_algebra_field(const std::string& s) {
    std::istringstream iss(s);
    std::string tok;
    std::map<std::string, std::string> kv;
    while (iss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw parse_error("bad algebra field: " + s);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    if (kv.count("d"))
        return {AlgebraDescriptor::imaginary_quadratic(parse_rat(kv["d"])), Int(0)};
    AlgebraDescriptor alg =
        AlgebraDescriptor::quaternion(parse_rat(kv.at("a")), parse_rat(kv.at("b")));
    Int m = kv.count("m") ? Int(kv["m"]) : Int(0);
    return {alg, m};
}

inline std::string algebra_field(const AlgebraDescriptor& alg, const Int& m) {
    if (alg.is_quadratic()) return "d=" + rat_str(-alg.b);
    std::string s = "a=" + rat_str(alg.a) + " b=" + rat_str(alg.b);
    if (m != 0) s += " m=" + m.get_str();
    return s;
}

}  // namespace io_detail

inline std::vector<GoldenRow> load_golden_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open golden table: " + path);
    std::vector<GoldenRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {  // header
            first = false;
            continue;
        }
        auto f = io_detail::split(line, ',');
        if (f.size() != 5) throw parse_error("golden table row needs 5 fields: " + line);
        GoldenRow r;
        r.dim = std::stoi(f[0]);
        auto [alg, m] = io_detail::parse_algebra_field(f[1]);
        r.alg = alg;
        r.m = m;
        r.basis = io_detail::parse_basis(f[2]);
        r.maximal = f[3] == "1";
        r.semi = f[4] == "1";
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<GoldenHoleRow> load_golden_holes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open golden hole table: " + path);
    std::vector<GoldenHoleRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            continue;
        }
        auto f = io_detail::split(line, ',');
        if (f.size() != 5) throw parse_error("golden hole row needs 5 fields: " + line);
        GoldenHoleRow r;
        r.dim = std::stoi(f[0]);
        auto [alg, m] = io_detail::parse_algebra_field(f[1]);
        r.alg = alg;
        r.m = m;
        r.basis = io_detail::parse_basis(f[2]);
        {
            std::istringstream iss(f[3]);
            std::string cell;
            while (iss >> cell) r.hole.push_back(parse_rat(cell));
        }
        if (!f[4].empty()) r.superorder = io_detail::parse_basis(f[4]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline void write_census_csv(const std::vector<CensusRecord>& recs, const std::string& path) {
    std::ofstream out(path);
    out << "dim,algebra,basis,maximal,semi,classification,red_disc,mu_sq\n";
    for (auto& r : recs) {
        out << r.order.dim() << "," << io_detail::algebra_field(r.order.alg, r.m) << ","
            << io_detail::basis_str(r.order.lattice.basis) << "," << (r.maximal ? 1 : 0) << ","
            << (r.cls == OrderClass::SemiEuclidean ? 1 : 0) << "," << order_class_name(r.cls) << ","
            << r.red_disc.get_str() << "," << rat_str(r.mu_sq) << "\n";
    }
}

inline void write_holes_csv(const std::vector<DeepHoleRow>& rows, const std::string& path) {
    std::ofstream out(path);
    out << "dim,algebra,basis,hole,superorder\n";
    for (auto& row : rows) {
        for (size_t i = 0; i < row.holes.size(); ++i) {
            out << row.record->order.dim() << ","
                << io_detail::algebra_field(row.record->order.alg, row.record->m) << ","
                << io_detail::basis_str(row.record->order.lattice.basis) << ",";
            QVec hv = elt_to_vec(row.holes[i]);
            for (size_t j = 0; j < hv.size(); ++j) out << (j ? " " : "") << rat_str(hv[j]);
            out << ",";
            if (i < row.superorders.size())
                out << io_detail::basis_str(row.superorders[i].lattice.basis);
            out << "\n";
        }
    }
}

// --- verification against golden data ----------------------------------------------------

struct TableDiff {
    std::vector<std::string> missing;     // golden rows with no census match
    std::vector<std::string> extra;       // census rows with no golden match
    std::vector<std::string> mismatched;  // matched rows with different flags
    std::vector<std::string> notes;       // informational (superorder class choices, etc.)
    bool ok() const { return missing.empty() && extra.empty() && mismatched.empty(); }
};

inline TableDiff verify_tables(const std::vector<CensusRecord>& recs,
                               const std::vector<GoldenRow>& golden) {
    TableDiff diff;
    std::vector<char> used(recs.size(), 0);
    for (auto& g : golden) {
        std::optional<InvolutionDescriptor> inv;
        if (g.dim == 4) inv = InvolutionDescriptor::orthogonal_ij(g.alg);
        OrderLattice gO = order_from_rows(g.alg, inv, g.basis);
        bool matched = false;
        for (size_t i = 0; i < recs.size(); ++i) {
            if (used[i]) continue;
            const CensusRecord& r = recs[i];
            if (!(r.order.alg == g.alg) || r.m != g.m) continue;
            if (!orders_isomorphic(r.order, gO)) continue;
            used[i] = 1;
            matched = true;
            bool r_semi = r.cls == OrderClass::SemiEuclidean;
            if (r.maximal != g.maximal || r_semi != g.semi)
                diff.mismatched.push_back(io_detail::algebra_field(g.alg, g.m) + " : " +
                                          io_detail::basis_str(g.basis) + " flags (maximal,semi) = (" +
                                          std::to_string(r.maximal) + "," + std::to_string(r_semi) +
                                          ") expected (" + std::to_string(g.maximal) + "," +
                                          std::to_string(g.semi) + ")");
            break;
        }
        if (!matched)
            diff.missing.push_back(io_detail::algebra_field(g.alg, g.m) + " : " +
                                   io_detail::basis_str(g.basis));
    }
    for (size_t i = 0; i < recs.size(); ++i)
        if (!used[i])
            diff.extra.push_back(io_detail::algebra_field(recs[i].order.alg, recs[i].m) + " : " +
                                 io_detail::basis_str(recs[i].order.lattice.basis));
    return diff;
}

// Hole tables: rows are matched per order up to isomorphism; hole classes must
// correspond under some isomorphism modulo lattice translations.  Superorder
// columns are compared as isomorphism classes and reported, not failed, when
// they differ (the reference leaves freedom in that column).
inline TableDiff verify_hole_tables(const std::vector<CensusRecord>& recs,
                                    const std::vector<GoldenHoleRow>& golden) {
    TableDiff diff;
    // group golden rows by order
    std::map<std::string, std::vector<const GoldenHoleRow*>> groups;
    for (auto& g : golden)
        groups[io_detail::algebra_field(g.alg, g.m) + "#" + io_detail::basis_str(g.basis)].push_back(
            &g);
    for (auto& [gkey, rows] : groups) {
        const GoldenHoleRow& g0 = *rows.front();
        std::optional<InvolutionDescriptor> inv;
        if (g0.dim == 4) inv = InvolutionDescriptor::orthogonal_ij(g0.alg);
        OrderLattice gO = order_from_rows(g0.alg, inv, g0.basis);
        const CensusRecord* match = nullptr;
        for (auto& r : recs) {
            if (!(r.order.alg == g0.alg) || r.m != g0.m) continue;
            if (orders_isomorphic(r.order, gO)) {
                match = &r;
                break;
            }
        }
        if (!match) {
            diff.missing.push_back(gkey + " (no matching census order)");
            continue;
        }
        if (match->holes_norm1.size() != rows.size()) {
            diff.mismatched.push_back(gkey + " hole class count " +
                                      std::to_string(match->holes_norm1.size()) + " expected " +
                                      std::to_string(rows.size()));
            continue;
        }
        // try every isomorphism: all golden holes must transport to census
        // hole classes bijectively modulo the division lattice
        GramLattice Lambda = euclidean_target_lattice(match->order);
        auto isos = order_isomorphisms(gO, match->order, 64);
        bool any = false;
        for (auto& T : isos) {
            std::vector<char> taken(match->holes_norm1.size(), 0);
            bool all = true;
            std::vector<int> assignment(rows.size(), -1);
            for (size_t gi = 0; gi < rows.size() && all; ++gi) {
                QVec th = qmat_apply(qmat_transpose(T), rows[gi]->hole);  // row * T
                bool ok = false;
                for (size_t ci = 0; ci < match->holes_norm1.size(); ++ci) {
                    if (taken[ci]) continue;
                    QVec d = qvec_sub(th, match->holes_norm1[ci]);
                    if (lattice_member(Lambda, d)) {
                        taken[ci] = 1;
                        assignment[gi] = static_cast<int>(ci);
                        ok = true;
                        break;
                    }
                }
                all = all && ok;
            }
            if (!all) continue;
            any = true;
            // informational superorder comparison
            for (size_t gi = 0; gi < rows.size(); ++gi) {
                if (rows[gi]->superorder.empty()) continue;
                size_t ci = static_cast<size_t>(assignment[gi]);
                if (ci >= match->hole_superorders.size()) continue;
                OrderLattice gsup = order_from_rows(g0.alg, inv, rows[gi]->superorder);
                if (!orders_isomorphic(gsup, match->hole_superorders[ci]))
                    diff.notes.push_back(gkey + " hole " + std::to_string(gi) +
                                         ": containing maximal order differs from the reference "
                                         "(equivalent choice)");
            }
            break;
        }
        if (!any) diff.mismatched.push_back(gkey + " hole classes do not correspond");
    }
    return diff;
}

}  // namespace qorder
