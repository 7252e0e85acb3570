#include "piqlab/cli/cli.hpp"

#include "piqlab/dynamics/projective.hpp"
#include "piqlab/dynamics/reduction.hpp"
#include "piqlab/dynamics/sym2.hpp"
#include "piqlab/engine/piq.hpp"
#include "piqlab/lattes/lattes.hpp"
#include "piqlab/linalg/linalg.hpp"
#include "piqlab/numeric/rational.hpp"
#include "piqlab/poly/cyclotomic.hpp"
#include "piqlab/series/polydisc.hpp"
#include "piqlab/uniformize/uniformize.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace piqlab::cli {

using dynamics::ProjPoint;
using dynamics::RationalMap;
using numeric::GaussianInteger;
using numeric::GaussianRational;
using numeric::Integer;
using numeric::Rational;

namespace {

// ---- field access with paths ----

[[noreturn]] void fail(const std::string& path, const std::string& msg)
{
    throw ConfigError((path.empty() ? std::string("config") : path) + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || item.key() == a;
        if (!ok) fail(join(path, item.key()), "unknown field");
    }
}

const Json& require(const Json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "required field is missing");
    return *it;
}

long as_long(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) fail(path, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(LONG_MAX)) {
        fail(path, "integer out of range");
    }
    return j.get<long>();
}

long as_at_least(const Json& j, const std::string& path, long lo)
{
    long v = as_long(j, path);
    if (v < lo) fail(path, "must be at least " + std::to_string(lo));
    return v;
}

std::string as_string(const Json& j, const std::string& path)
{
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Rational as_rational(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return Rational(as_long(j, path));
    if (!j.is_string()) fail(path, "expected an integer or a rational string");
    try {
        return numeric::parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

GaussianRational as_gaussian(const Json& j, const std::string& path)
{
    if (j.is_number_integer()) return GaussianRational(Rational(as_long(j, path)));
    if (!j.is_string()) fail(path, "expected an integer or a number string");
    try {
        return numeric::parse_gaussian(j.get<std::string>());
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

template <class F>
auto as_list(const Json& j, const std::string& path, F&& item)
{
    if (!j.is_array()) fail(path, "expected an array");
    std::vector<decltype(item(j[0], path))> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(item(j[k], at(path, k)));
    return out;
}

std::vector<long> long_list(const Json& j, const std::string& path, long lo)
{
    return as_list(j, path, [lo](const Json& x, const std::string& p) { return as_at_least(x, p, lo); });
}

long as_prime(const Json& j, const std::string& path)
{
    long p = as_at_least(j, path, 2);
    if (!numeric::is_probable_prime(Integer(p))) fail(path, std::to_string(p) + " is not prime");
    return p;
}

// ---- domain objects from the config ----

RationalMap build_map(const Json& j, const std::string& path)
{
    try {
        if (j.is_string()) return dynamics::parse_map(j.get<std::string>());
        check_keys(j, path, {"F0", "F1"});
        auto a = as_list(require(j, path, "F0"), join(path, "F0"), as_gaussian);
        auto b = as_list(require(j, path, "F1"), join(path, "F1"), as_gaussian);
        std::size_t n = std::max(a.size(), b.size());
        if (n < 2) fail(path, "a map needs degree at least 1");
        int d = static_cast<int>(n) - 1;
        return RationalMap(dynamics::Form(d, a), dynamics::Form(d, b));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

ProjPoint build_point(const Json& j, const std::string& path)
{
    try {
        return dynamics::parse_point(as_string(j, path));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

engine::Subscheme build_subscheme(const std::optional<Json>& doc)
{
    const std::string path = "subscheme";
    if (!doc) return engine::Subscheme::diagonal();
    const Json& j = *doc;
    std::string kind = j.is_string() ? j.get<std::string>() : as_string(require(j, path, "kind"), join(path, "kind"));
    if (kind == "diagonal" || kind == "lines-through-infinity") {
        if (j.is_object()) check_keys(j, path, {"kind"});
        return kind == "diagonal" ? engine::Subscheme::diagonal() : engine::Subscheme::lines_through_infinity();
    }
    if (!j.is_object()) fail(path, "kind '" + kind + "' needs an object");
    if (kind == "point") {
        check_keys(j, path, {"kind", "P", "Q"});
        return engine::Subscheme::point(build_point(require(j, path, "P"), join(path, "P")),
                                        build_point(require(j, path, "Q"), join(path, "Q")));
    }
    if (kind == "curve") {
        check_keys(j, path, {"kind", "degree", "terms"});
        auto deg = long_list(require(j, path, "degree"), join(path, "degree"), 0);
        if (deg.size() != 2) fail(join(path, "degree"), "expected [deg_x, deg_y]");
        std::map<poly::BiHomPoly::Key, GaussianRational> terms;
        const Json& t = require(j, path, "terms");
        if (!t.is_array()) fail(join(path, "terms"), "expected an array");
        for (std::size_t k = 0; k < t.size(); ++k) {
            std::string tp = at(join(path, "terms"), k);
            if (!t[k].is_array() || t[k].size() != 3) fail(tp, "expected [i, j, coefficient]");
            int i = static_cast<int>(as_at_least(t[k][0], at(tp, 0), 0));
            int jj = static_cast<int>(as_at_least(t[k][1], at(tp, 1), 0));
            terms[{i, jj}] += as_gaussian(t[k][2], at(tp, 2));
        }
        try {
            return engine::Subscheme::curve(
                poly::BiHomPoly(static_cast<int>(deg[0]), static_cast<int>(deg[1]), std::move(terms)));
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }
    fail(join(path, "kind"), "unknown kind '" + kind + "'");
}

struct SeriesEntry {
    series::PolydiscSeries f;
    series::Radius r;
};

SeriesEntry build_series(const Json& j, const std::string& path)
{
    check_keys(j, path, {"p", "nvars", "truncation", "precision", "terms", "radius", "tail"});
    long p = as_prime(require(j, path, "p"), join(path, "p"));
    int nvars = static_cast<int>(as_at_least(require(j, path, "nvars"), join(path, "nvars"), 1));
    int D = j.contains("truncation") ? static_cast<int>(as_at_least(j["truncation"], join(path, "truncation"), 0)) : 12;
    long prec = j.contains("precision") ? as_at_least(j["precision"], join(path, "precision"), 1) : 40;
    const Json& t = require(j, path, "terms");
    if (!t.is_array()) fail(join(path, "terms"), "expected an array");
    std::map<series::MultiIndex, Rational> terms;
    for (std::size_t k = 0; k < t.size(); ++k) {
        std::string tp = at(join(path, "terms"), k);
        if (!t[k].is_array() || t[k].size() != 2) fail(tp, "expected [[i_1, ..., i_n], coefficient]");
        auto idx = long_list(t[k][0], at(tp, 0), 0);
        if (static_cast<int>(idx.size()) != nvars) fail(at(tp, 0), "index length differs from nvars");
        series::MultiIndex I(idx.begin(), idx.end());
        terms[I] += as_rational(t[k][1], at(tp, 1));
    }
    auto radius_from = [&](const Json& r, const std::string& rp) {
        auto e = as_list(r, rp, as_rational);
        if (e.size() == 1) return series::Radius::uniform(nvars, e[0]);
        if (static_cast<int>(e.size()) != nvars) fail(rp, "expected one exponent per variable");
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] < 0) fail(at(rp, k), "radius exponents must be nonnegative");
        }
        return series::Radius{e};
    };
    series::Radius r = j.contains("radius") ? radius_from(j["radius"], join(path, "radius"))
                                            : series::Radius::uniform(nvars, Rational(0));
    SeriesEntry out{series::PolydiscSeries::from_rational_terms(Integer(p), nvars, D, terms, prec), r};
    if (j.contains("tail")) {
        std::string tp = join(path, "tail");
        check_keys(j["tail"], tp, {"exponent", "radius"});
        Rational tau = as_rational(require(j["tail"], tp, "exponent"), join(tp, "exponent"));
        series::Radius ref = j["tail"].contains("radius") ? radius_from(j["tail"]["radius"], join(tp, "radius")) : r;
        out.f.add_tail(tau, ref);
    }
    return out;
}

linalg::Matrix build_matrix(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    std::vector<std::vector<Rational>> rows;
    for (std::size_t k = 0; k < j.size(); ++k) rows.push_back(as_list(j[k], at(path, k), as_rational));
    try {
        linalg::Matrix M = linalg::Matrix::from_rows(rows);
        if (!M.is_square()) fail(path, "expected a square matrix");
        return M;
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

linalg::SubspaceBasis build_subspace(const Json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of basis vectors");
    std::vector<std::vector<Rational>> vs;
    for (std::size_t k = 0; k < j.size(); ++k) vs.push_back(as_list(j[k], at(path, k), as_rational));
    try {
        return linalg::SubspaceBasis(vs);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

dynamics::QuadraticPoint build_quadratic(const Json& j, const std::string& path)
{
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") fail(path, "expected \"inf\" or {a, b, D}");
        return std::nullopt;
    }
    check_keys(j, path, {"a", "b", "D"});
    dynamics::QuadraticNumber x;
    x.a = as_rational(require(j, path, "a"), join(path, "a"));
    x.b = j.contains("b") ? as_rational(j["b"], join(path, "b")) : Rational(0);
    x.D = Integer(as_long(require(j, path, "D"), join(path, "D")));
    if (x.b != 0 && mpz_perfect_square_p(x.D.get_mpz_t()) != 0) fail(join(path, "D"), "must not be a square");
    return x;
}

poly::BinaryForm<Rational> build_form(const Json& j, const std::string& path)
{
    check_keys(j, path, {"degree", "coefficients"});
    int d = static_cast<int>(as_at_least(require(j, path, "degree"), join(path, "degree"), 1));
    auto c = as_list(require(j, path, "coefficients"), join(path, "coefficients"), as_rational);
    if (static_cast<int>(c.size()) != d + 1) fail(join(path, "coefficients"), "expected degree + 1 entries");
    poly::BinaryForm<Rational> F(d, c);
    if (F.is_zero()) fail(path, "the form is zero");
    return F;
}

// ---- report fragments ----

bool nonzero(const Rational& q) { return q != 0; }
bool nonzero(const GaussianRational& z) { return !z.is_zero(); }
bool nonzero(const GaussianInteger& z) { return !z.is_zero(); }

template <class T>
Json coeff_map(const std::vector<T>& c)
{
    Json out = Json::object();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (nonzero(c[k])) out[std::to_string(k)] = numeric::to_string(c[k]);
    }
    return out;
}

Json map_json(const RationalMap& f)
{
    return Json{{"text", f.to_string()},
                {"degree", f.degree()},
                {"F0", coeff_map(f.coeffs0())},
                {"F1", coeff_map(f.coeffs1())}};
}

Json pair_json(const engine::PointPair& x) { return Json::array({x.first.to_string(), x.second.to_string()}); }

template <class T>
Json json_list(const std::vector<T>& v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x);
    return out;
}

Json padic_list(const series::PolydiscSeries& f, int D)
{
    Json out = Json::array();
    for (int k = 0; k <= D; ++k) out.push_back(f.coefficient({k}).to_string());
    return out;
}

std::string error_kind(const std::exception& e)
{
    if (dynamic_cast<const TailDominates*>(&e)) return "TailDominates";
    if (dynamic_cast<const PrecisionLoss*>(&e)) return "PrecisionLoss";
    if (dynamic_cast<const NotDivisible*>(&e)) return "NotDivisible";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "InvalidArgument";
    return "Error";
}

Json error_json(const std::exception& e) { return Json{{"kind", error_kind(e)}, {"message", e.what()}}; }

// ---- commands ----

template <class T>
const T& need(const std::optional<T>& v, const char* name, const std::string& command)
{
    if (!v) fail(name, "required by " + command);
    return *v;
}

engine::ProductSystem build_system(const ExperimentConfig& c)
{
    RationalMap f = build_map(need(c.f, "f", c.command), "f");
    RationalMap g = c.g ? build_map(*c.g, "g") : f;
    engine::ProductSystem sys = engine::ProductSystem::make(f, g);
    if (c.field == "Q" && sys.field != engine::BaseField::Q) fail("field", "the maps are not defined over Q");
    if (c.field == "Q(i)") sys.field = engine::BaseField::QI;
    return sys;
}

Json system_json(const engine::ProductSystem& sys)
{
    return Json{{"field", engine::to_string(sys.field)}, {"f", map_json(sys.f)}, {"g", map_json(sys.g)}};
}

Json scan_results(const engine::TailScan& scan)
{
    Json tails = Json::array();
    for (std::size_t s = 0; s < scan.tail_counts.size(); ++s) {
        Json sample = Json::array();
        if (s < scan.tails.size()) {
            for (const auto& x : scan.tails[s]) sample.push_back(pair_json(x));
        }
        tails.push_back(Json{{"s", s}, {"count", scan.tail_counts[s]}, {"sample", sample}});
    }
    return Json{{"points_per_coordinate", scan.points},
                {"pairs", scan.points * scan.points},
                {"inside", scan.inside}, {"never", scan.never}, {"tails", tails}};
}

Json run_piq(const ExperimentConfig& c, const RunOptions& opts, bool generalized)
{
    engine::ProductSystem sys = build_system(c);
    engine::Subscheme Y = build_subscheme(c.subscheme);
    long H = c.bounds.H.value_or(20);
    int S = static_cast<int>(c.bounds.S_max.value_or(10));
    engine::ScanOptions so;
    so.jobs = opts.jobs;
    so.keep_per_level = static_cast<std::size_t>(c.keep_per_level.value_or(5));
    Json res{{"system", system_json(sys)}, {"subscheme", Y.to_string()}, {"H", H}, {"S_max", S}};
    if (generalized) {
        res["invariant"] = engine::check_invariant(sys, Y);
        res.update(scan_results(engine::scan_tails(sys, Y, H, S, so)));
    } else {
        engine::S0Result r = engine::empirical_s0(sys, Y, H, S, so);
        res["invariant"] = true;
        res.update(scan_results(r.scan));
        res["s0"] = r.s0 ? Json(*r.s0) : Json(nullptr);
    }
    return res;
}

Json recipe_json(const lattes::RecipeReport& r)
{
    return Json{{"commute", r.commute},     {"invariant", r.invariant},         {"proper", r.proper},
                {"dense", r.dense},         {"proper_method", r.proper_method}, {"applicable", r.applicable()}};
}

Json run_lattes_build(const ExperimentConfig&)
{
    lattes::LattesPair p = lattes::build_lattes_pair();
    RationalMap five = RationalMap::fraction(lattes::CMCurve::multiplication_x_map(5).num(),
                                             lattes::CMCurve::multiplication_x_map(5).den());
    RationalMap fg = dynamics::compose(p.F, p.G);
    RationalMap gf = dynamics::compose(p.G, p.F);
    return Json{{"F", map_json(p.F)},
                {"G", map_json(p.G)},
                {"alpha", numeric::to_string(p.alpha)},
                {"beta", numeric::to_string(p.beta)},
                {"kernel_F", coeff_map(p.kernel_F.coefficients())},
                {"kernel_G", coeff_map(p.kernel_G.coefficients())},
                {"identity",
                 {{"FG_equals_x5", fg == five}, {"GF_equals_x5", gf == five}, {"degree", fg.degree()}}},
                {"recipe", recipe_json(lattes::verify_recipe(p))}};
}

Json run_lattes_witness(const ExperimentConfig& c, const RunOptions& opts)
{
    lattes::LattesPair p = lattes::build_lattes_pair();
    std::vector<long> levels = c.levels.empty() ? std::vector<long>{0, 1, 2, 3, 4} : c.levels;
    std::vector<ProjPoint> seeds;
    if (!c.seeds.empty()) {
        for (std::size_t k = 0; k < c.seeds.size(); ++k) seeds.push_back(build_point(c.seeds[k], at("seeds", k)));
    } else {
        seeds = dynamics::enumerate_gaussian_points(c.seed_height.value_or(10));
    }
    auto cap = static_cast<std::size_t>(c.max_witnesses.value_or(1));
    Json out = Json::array();
    for (long s : levels) {
        lattes::WitnessReport w = lattes::witness_points(p, static_cast<int>(s), seeds, cap, opts.jobs);
        Json ws = Json::array();
        for (const auto& x : w.witnesses) {
            ws.push_back(Json{{"seed", x.seed.to_string()}, {"entry_time", x.entry_time}, {"x", pair_json(x.x)}});
        }
        out.push_back(Json{{"s", s}, {"witnesses", ws}, {"seeds_consumed", w.seeds_consumed}});
    }
    return Json{{"F", map_json(p.F)}, {"G", map_json(p.G)}, {"seed_count", seeds.size()}, {"levels", out}};
}

Json run_modp(const ExperimentConfig& c)
{
    engine::ProductSystem sys = build_system(c);
    engine::Subscheme Y = build_subscheme(c.subscheme);
    std::vector<long> primes = c.primes;
    if (primes.empty()) primes.push_back(dynamics::choose_good_prime({sys.f, sys.g}));
    Json out = Json::array();
    for (long p : primes) {
        engine::ModpReport r = engine::modp_piq_report(sys, Y, p);
        Json pairs = Json::array();
        for (const auto& [a, b] : r.fixed_pairs) pairs.push_back(Json::array({a, b}));
        out.push_back(Json{{"p", r.p},
                           {"idempotent_exponent", r.idempotent_exponent},
                           {"fixed_f", json_list(r.fixed_f)},
                           {"fixed_g", json_list(r.fixed_g)},
                           {"fixed_pairs", pairs},
                           {"y_size", r.y_size},
                           {"s0", r.s0}});
    }
    return Json{{"system", system_json(sys)}, {"subscheme", Y.to_string()}, {"reports", out}};
}

Json run_uniformize(const ExperimentConfig& c, bool boettcher)
{
    const Json& g = need(c.germ, "germ", c.command);
    check_keys(g, "germ", {"p", "coefficients", "fixed_point"});
    long p = as_prime(require(g, "germ", "p"), "germ.p");
    int D = static_cast<int>(c.bounds.truncation.value_or(12));
    long prec = c.bounds.precision.value_or(40);
    uniformize::Germ F;
    Json res{{"p", p}, {"truncation", D}, {"precision", prec}};
    if (g.contains("coefficients")) {
        if (g.contains("fixed_point")) fail("germ", "give coefficients or fixed_point, not both");
        auto coeffs = as_list(g["coefficients"], "germ.coefficients", as_rational);
        try {
            F = uniformize::Germ::from_rational(Integer(p), coeffs, D, prec);
        } catch (const std::invalid_argument& e) {
            fail("germ", e.what());
        }
    } else {
        long xi = as_at_least(require(g, "germ", "fixed_point"), "germ.fixed_point", 0);
        if (xi >= p) fail("germ.fixed_point", "expected a residue in [0, p)");
        RationalMap f = build_map(need(c.f, "f", c.command), "f");
        try {
            F = dynamics::local_germ(f, xi, p, D, prec);
        } catch (const std::invalid_argument& e) {
            fail("germ", e.what());
        }
        res["map"] = map_json(f);
        res["fixed_point"] = xi;
    }
    res["germ"] = padic_list(F.series(), D);
    uniformize::Conjugacy k = boettcher ? uniformize::boettcher_coordinate(F, D) : uniformize::koenigs_linearize(F, D);
    res["phi"] = padic_list(k.phi, D);
    res["source_exponent"] = numeric::to_string(k.source_exponent);
    res["target_exponent"] = numeric::to_string(k.target_exponent);
    res["certified"] = k.certified;
    res["precision_exponent"] = numeric::to_string(k.precision_exponent);
    res["residual_exponent"] = numeric::to_string(k.residual_exponent);
    res["residual_within_certificate"] = k.residual_within_certificate;
    return res;
}

std::vector<Json> series_entries(const ExperimentConfig& c)
{
    const Json& s = need(c.series, "series", c.command);
    if (!s.is_array()) fail("series", "expected an array");
    return std::vector<Json>(s.begin(), s.end());
}

Json index_json(const series::MultiIndex& I) { return json_list(I); }

Json run_gauss_norm(const ExperimentConfig& c)
{
    Json out = Json::array();
    auto entries = series_entries(c);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        SeriesEntry e = build_series(entries[k], at("series", k));
        Json row{{"index", k}, {"series", e.f.to_string()}};
        try {
            row["norm_exponent"] = numeric::to_string(series::gauss_norm(e.f, e.r));
            row["ord"] = series::ord(e.f, e.r);
            row["prime_factor_bound"] = series::prime_factor_bound(e.f, e.r);
        } catch (const Error& err) {
            row["error"] = error_json(err);
        }
        out.push_back(row);
    }
    return Json{{"series", out}};
}

Json run_ord_scan(const ExperimentConfig& c)
{
    int M = static_cast<int>(c.bounds.grid_depth.value_or(4));
    Json out = Json::array();
    auto entries = series_entries(c);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        SeriesEntry e = build_series(entries[k], at("series", k));
        Json row{{"index", k}, {"series", e.f.to_string()}};
        try {
            Json ords = Json::array();
            for (int step = 0; step <= M; ++step) {
                series::Radius s = e.r;
                for (auto& m : s.exponents) m += step;
                ords.push_back(series::ord(e.f, s));
            }
            Json sizes = Json::array();
            std::set<series::MultiIndex> last;
            for (int depth = 0; depth <= M; ++depth) {
                last = series::staircase_set(e.f, e.r, depth);
                sizes.push_back(last.size());
            }
            int stable = M;
            while (stable > 0 && sizes[static_cast<std::size_t>(stable - 1)] == sizes[static_cast<std::size_t>(M)]) {
                --stable;
            }
            Json idx = Json::array();
            for (const auto& I : last) idx.push_back(index_json(I));
            row["ord_along_diagonal"] = ords;
            row["staircase_sizes"] = sizes;
            row["staircase"] = idx;
            row["stable_from_depth"] = stable;
        } catch (const Error& err) {
            row["error"] = error_json(err);
        }
        out.push_back(row);
    }
    return Json{{"grid_depth", M}, {"series", out}};
}

Json run_period_bound(const ExperimentConfig& c)
{
    if (c.dimensions.empty() && !c.matrix) fail("dimensions", "required by period-bound unless a matrix is given");
    Json bounds = Json::array();
    for (long n : c.dimensions) {
        bounds.push_back(Json{{"n", n}, {"period_bound", numeric::to_string(linalg::period_bound(n))}});
    }
    Json res{{"bounds", bounds}};
    if (c.matrix) {
        linalg::Matrix M = build_matrix(*c.matrix, "matrix");
        linalg::SubspaceBasis W = build_subspace(need(c.subspace, "subspace", c.command), "subspace");
        if (W.ambient() != M.rows()) fail("subspace", "vectors must have the matrix dimension");
        long n = static_cast<long>(M.rows());
        Integer B = linalg::period_bound(n);
        long n_max = c.bounds.n_max ? *c.bounds.n_max : (B.fits_slong_p() ? B.get_si() : LONG_MAX);
        try {
            auto direct = linalg::subspace_period(M, W, n_max);
            auto via = linalg::subspace_period(linalg::exterior_power(M, W.dimension()), linalg::exterior_line(W), n_max);
            res["period"] = Json{{"n", n},
                                 {"subspace_dimension", W.dimension()},
                                 {"n_max", n_max},
                                 {"period_bound", numeric::to_string(B)},
                                 {"period", direct ? Json(*direct) : Json(nullptr)},
                                 {"period_via_exterior_power", via ? Json(*via) : Json(nullptr)}};
        } catch (const std::invalid_argument& e) {
            fail("matrix", e.what());
        }
    }
    return res;
}

Json run_cyclo_split(const ExperimentConfig& c)
{
    linalg::Matrix M = build_matrix(need(c.matrix, "matrix", c.command), "matrix");
    linalg::CyclotomicMinpolySplit r = linalg::minpoly_cyclotomic_split(M, c.bounds.n_max.value_or(0));
    return Json{{"matrix", M.to_string()},
                {"n0", r.n0},
                {"m", r.m},
                {"minpoly", coeff_map(r.minpoly.coefficients())},
                {"Q", coeff_map(r.Q.coefficients())},
                {"Q_cyclotomic_free", poly::is_cyclotomic_free(r.Q)}};
}

std::string quadratic_string(const dynamics::QuadraticPoint& x) { return x ? x->to_string() : "inf"; }

Json p2_json(const dynamics::P2Point& q)
{
    return Json::array({numeric::to_string(q.u[0]), numeric::to_string(q.u[1]), numeric::to_string(q.u[2])});
}

dynamics::QuadraticPoint random_quadratic(std::mt19937_64& rng)
{
    static const long discriminants[] = {-1, -2, -3, 2, 3, 5, -7};
    std::uniform_int_distribution<long> num(-5, 5), den(1, 4), pick(0, 6);
    dynamics::QuadraticNumber x;
    x.D = Integer(discriminants[pick(rng)]);
    x.a = Rational(num(rng), den(rng));
    x.a.canonicalize();
    long bn = 0;
    while (bn == 0) bn = num(rng);
    x.b = Rational(bn, den(rng));
    x.b.canonicalize();
    return x;
}

Json run_descend_sym2(const ExperimentConfig& c)
{
    RationalMap f = build_map(need(c.f, "f", c.command), "f");
    if (!f.is_rational()) fail("f", "descend-sym2 needs a map over Q");
    dynamics::Sym2Map S = dynamics::symmetric_square_descent(f);
    std::vector<dynamics::QuadraticPoint> pts;
    if (c.points) {
        if (!c.points->is_array()) fail("points", "expected an array");
        for (std::size_t k = 0; k < c.points->size(); ++k) pts.push_back(build_quadratic((*c.points)[k], at("points", k)));
    }
    std::mt19937_64 rng(c.seed.value_or(1));
    for (long k = 0; k < c.random_points.value_or(0); ++k) pts.push_back(random_quadratic(rng));
    std::optional<poly::BinaryForm<Rational>> Y;
    if (c.curve) Y = build_form(*c.curve, "curve");

    Json comps = Json::array();
    for (const auto& comp : S.components) {
        Json terms = Json::array();
        for (const auto& [mono, coef] : comp) {
            terms.push_back(Json::array({Json::array({mono[0], mono[1], mono[2]}), numeric::to_string(coef)}));
        }
        comps.push_back(terms);
    }
    Json rows = Json::array();
    bool all_commute = true, membership = true;
    for (const auto& x : pts) {
        dynamics::QuadraticPoint fx = dynamics::map_quadratic(f, x);
        dynamics::P2Point dx = dynamics::descend(x);
        dynamics::P2Point lhs = dynamics::descend(fx);
        dynamics::P2Point rhs = S(dx);
        Json row{{"x", quadratic_string(x)},
                 {"f_x", quadratic_string(fx)},
                 {"descend_x", p2_json(dx)},
                 {"descend_f_x", p2_json(lhs)},
                 {"sym2_image", p2_json(rhs)},
                 {"commutes", lhs == rhs}};
        all_commute = all_commute && lhs == rhs;
        if (Y) {
            bool on = dynamics::lies_on(*Y, x);
            bool in = dynamics::sym2_contains(*Y, dx);
            row["on_Y"] = on;
            row["in_sym2_Y"] = in;
            membership = membership && on == in;
        }
        rows.push_back(row);
    }
    Json res{{"map", map_json(f)}, {"sym2", {{"degree", S.degree}, {"components", comps}}}, {"points", rows},
             {"all_commute", all_commute}};
    if (Y) res["membership_agrees"] = membership;
    return res;
}

Json run_results(const ExperimentConfig& c, const RunOptions& opts)
{
    const std::string& cmd = c.command;
    if (cmd == "piq-run") return run_piq(c, opts, false);
    if (cmd == "gpiq-run") return run_piq(c, opts, true);
    if (cmd == "lattes-build") return run_lattes_build(c);
    if (cmd == "lattes-witness") return run_lattes_witness(c, opts);
    if (cmd == "modp-report") return run_modp(c);
    if (cmd == "linearize") return run_uniformize(c, false);
    if (cmd == "boettcher") return run_uniformize(c, true);
    if (cmd == "gauss-norm") return run_gauss_norm(c);
    if (cmd == "ord-scan") return run_ord_scan(c);
    if (cmd == "period-bound") return run_period_bound(c);
    if (cmd == "cyclo-split") return run_cyclo_split(c);
    if (cmd == "descend-sym2") return run_descend_sym2(c);
    fail("command", "unknown command '" + cmd + "'");
}

// result fields every report of the command carries
const std::map<std::string, std::vector<std::string>>& required_results()
{
    static const std::map<std::string, std::vector<std::string>> r{
        {"piq-run",
         {"system", "subscheme", "H", "S_max", "invariant", "points_per_coordinate", "pairs", "inside", "never", "tails",
          "s0"}},
        {"gpiq-run",
         {"system", "subscheme", "H", "S_max", "invariant", "points_per_coordinate", "pairs", "inside", "never",
          "tails"}},
        {"lattes-build", {"F", "G", "alpha", "beta", "kernel_F", "kernel_G", "identity", "recipe"}},
        {"lattes-witness", {"F", "G", "seed_count", "levels"}},
        {"modp-report", {"system", "subscheme", "reports"}},
        {"linearize", {"p", "truncation", "precision", "germ", "phi", "certified", "residual_within_certificate"}},
        {"boettcher", {"p", "truncation", "precision", "germ", "phi", "certified", "residual_within_certificate"}},
        {"gauss-norm", {"series"}},
        {"ord-scan", {"grid_depth", "series"}},
        {"period-bound", {"bounds"}},
        {"cyclo-split", {"matrix", "n0", "m", "minpoly", "Q", "Q_cyclotomic_free"}},
        {"descend-sym2", {"map", "sym2", "points", "all_commute"}},
    };
    return r;
}

} // namespace

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"piq-run",   "gpiq-run",   "lattes-build", "lattes-witness",
                                            "modp-report", "linearize", "boettcher",    "gauss-norm",
                                            "ord-scan",  "period-bound", "cyclo-split", "descend-sym2"};
    return c;
}

Json to_json(const ExperimentConfig& c)
{
    Json j;
    j["command"] = c.command;
    if (c.field) j["field"] = *c.field;
    if (c.f) j["f"] = *c.f;
    if (c.g) j["g"] = *c.g;
    if (c.subscheme) j["subscheme"] = *c.subscheme;
    Json b = Json::object();
    if (c.bounds.H) b["H"] = *c.bounds.H;
    if (c.bounds.S_max) b["S_max"] = *c.bounds.S_max;
    if (c.bounds.precision) b["precision"] = *c.bounds.precision;
    if (c.bounds.truncation) b["truncation"] = *c.bounds.truncation;
    if (c.bounds.grid_depth) b["grid_depth"] = *c.bounds.grid_depth;
    if (c.bounds.n_max) b["n_max"] = *c.bounds.n_max;
    if (!b.empty()) j["bounds"] = b;
    if (!c.levels.empty()) j["levels"] = c.levels;
    if (!c.primes.empty()) j["primes"] = c.primes;
    if (!c.dimensions.empty()) j["dimensions"] = c.dimensions;
    if (!c.seeds.empty()) j["seeds"] = c.seeds;
    if (c.seed_height) j["seed_height"] = *c.seed_height;
    if (c.max_witnesses) j["max_witnesses"] = *c.max_witnesses;
    if (c.keep_per_level) j["keep_per_level"] = *c.keep_per_level;
    if (c.random_points) j["random_points"] = *c.random_points;
    if (c.germ) j["germ"] = *c.germ;
    if (c.series) j["series"] = *c.series;
    if (c.matrix) j["matrix"] = *c.matrix;
    if (c.subspace) j["subspace"] = *c.subspace;
    if (c.points) j["points"] = *c.points;
    if (c.curve) j["curve"] = *c.curve;
    if (c.output) j["output"] = *c.output;
    if (c.seed) j["seed"] = *c.seed;
    return j;
}

ExperimentConfig config_from_json(const Json& j)
{
    check_keys(j, "", {"command", "field", "f", "g", "subscheme", "bounds", "levels", "primes", "dimensions", "seeds",
                       "seed_height", "max_witnesses", "keep_per_level", "random_points", "germ", "series", "matrix",
                       "subspace", "points", "curve", "output", "seed"});
    ExperimentConfig c;
    c.command = as_string(require(j, "", "command"), "command");
    const auto& cmds = commands();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) {
        fail("command", "unknown command '" + c.command + "'");
    }
    if (j.contains("field")) {
        c.field = as_string(j["field"], "field");
        if (*c.field != "Q" && *c.field != "Q(i)") fail("field", "expected \"Q\" or \"Q(i)\"");
    }
    if (j.contains("f")) {
        build_map(j["f"], "f");
        c.f = j["f"];
    }
    if (j.contains("g")) {
        build_map(j["g"], "g");
        c.g = j["g"];
    }
    if (j.contains("subscheme")) {
        build_subscheme(j["subscheme"]);
        c.subscheme = j["subscheme"];
    }
    if (j.contains("bounds")) {
        const Json& b = j["bounds"];
        check_keys(b, "bounds", {"H", "S_max", "precision", "truncation", "grid_depth", "n_max"});
        auto pos = [&](const char* key, std::optional<long>& slot) {
            if (b.contains(key)) slot = as_at_least(b[key], join("bounds", key), 1);
        };
        pos("H", c.bounds.H);
        pos("S_max", c.bounds.S_max);
        pos("precision", c.bounds.precision);
        pos("truncation", c.bounds.truncation);
        pos("grid_depth", c.bounds.grid_depth);
        pos("n_max", c.bounds.n_max);
    }
    if (j.contains("levels")) c.levels = long_list(j["levels"], "levels", 0);
    if (j.contains("primes")) {
        c.primes = as_list(j["primes"], "primes", as_prime);
    }
    if (j.contains("dimensions")) c.dimensions = long_list(j["dimensions"], "dimensions", 1);
    if (j.contains("seeds")) {
        c.seeds = as_list(j["seeds"], "seeds", as_string);
        for (std::size_t k = 0; k < c.seeds.size(); ++k) build_point(c.seeds[k], at("seeds", k));
    }
    auto opt = [&](const char* key, std::optional<long>& slot, long lo) {
        if (j.contains(key)) slot = as_at_least(j[key], key, lo);
    };
    opt("seed_height", c.seed_height, 1);
    opt("max_witnesses", c.max_witnesses, 1);
    opt("keep_per_level", c.keep_per_level, 0);
    opt("random_points", c.random_points, 0);
    auto block = [&](const char* key, std::optional<Json>& slot) {
        if (j.contains(key)) slot = j[key];
    };
    block("germ", c.germ);
    block("series", c.series);
    block("matrix", c.matrix);
    block("subspace", c.subspace);
    block("points", c.points);
    block("curve", c.curve);
    if (j.contains("output")) c.output = as_string(j["output"], "output");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

ExperimentConfig parse_config(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    return config_from_json(j);
}

Json run(const ExperimentConfig& config, const RunOptions& opts)
{
    auto start = std::chrono::steady_clock::now();
    Json results = run_results(config, opts);
    Json report;
    report["schema_version"] = kSchemaVersion;
    report["artifact_version"] = kArtifactVersion;
    report["command"] = config.command;
    report["config"] = to_json(config);
    report["results"] = std::move(results);
    if (opts.timing) {
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        report["wall_clock_seconds"] = dt.count();
    }
    return report;
}

std::vector<std::string> validate_report(const Json& report)
{
    std::vector<std::string> errs;
    if (!report.is_object()) return {"report is not an object"};
    static const std::set<std::string> allowed{"schema_version", "artifact_version", "command",
                                               "config",         "results",          "wall_clock_seconds"};
    for (const auto& item : report.items()) {
        if (!allowed.count(item.key())) errs.push_back("unexpected field " + item.key());
    }
    if (!report.contains("schema_version") || report["schema_version"] != kSchemaVersion) {
        errs.push_back("schema_version must be \"1\"");
    }
    if (!report.contains("artifact_version") || !report["artifact_version"].is_string()) {
        errs.push_back("artifact_version must be a string");
    }
    if (report.contains("wall_clock_seconds") && !report["wall_clock_seconds"].is_number()) {
        errs.push_back("wall_clock_seconds must be a number");
    }
    if (!report.contains("command") || !report["command"].is_string()) {
        errs.push_back("command must be a string");
        return errs;
    }
    std::string cmd = report["command"].get<std::string>();
    auto req = required_results().find(cmd);
    if (req == required_results().end()) {
        errs.push_back("unknown command " + cmd);
        return errs;
    }
    if (!report.contains("config") || !report["config"].is_object()) {
        errs.push_back("config must be an object");
    } else {
        try {
            if (config_from_json(report["config"]).command != cmd) errs.push_back("config.command differs");
        } catch (const ConfigError& e) {
            errs.push_back(std::string("config does not parse: ") + e.what());
        }
    }
    if (!report.contains("results") || !report["results"].is_object()) {
        errs.push_back("results must be an object");
        return errs;
    }
    for (const auto& key : req->second) {
        if (!report["results"].contains(key)) errs.push_back("results." + key + " is missing");
    }
    return errs;
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const InvarianceViolated*>(&e)) return 3;
    if (dynamic_cast<const ExtensionRequired*>(&e)) return 4;
    if (dynamic_cast<const PrecisionLoss*>(&e)) return 5;
    if (dynamic_cast<const SearchExhausted*>(&e)) return 6;
    return 1;
}

void write_atomically(const std::string& path, const std::string& content)
{
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

} // namespace piqlab::cli
