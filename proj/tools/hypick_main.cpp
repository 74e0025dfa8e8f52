// Command line front end: each subcommand reads a problem file (where one
// applies), prints a deterministic JSON report on stdout, and signals its
// verdict through the exit status (0 positive, 1 negative, 2 bad usage or
// bad input).

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypick/hypick.hpp"

namespace {

using json = nlohmann::ordered_json;
using hypick::complex;
using hypick::UnitPoint;

// Thrown for anything that should terminate with status 2.
struct UsageFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ProblemFile {
    std::vector<UnitPoint> points;
    std::vector<UnitPoint> targets; // empty when the file has none
    json metadata;                  // null when absent
    std::string digest;
};

std::vector<UnitPoint> parse_point_array(const json& arr, const char* what) {
    std::vector<UnitPoint> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& e = arr[i];
        if (!e.is_object() || !e.contains("re") || !e.contains("im") ||
            !e["re"].is_number() || !e["im"].is_number())
            throw UsageFail(std::string(what) + "[" + std::to_string(i) +
                            "] must be an object with numeric re and im");
        try {
            out.emplace_back(complex(e["re"].get<double>(), e["im"].get<double>()));
        } catch (const hypick::DomainError&) {
            throw UsageFail(std::string(what) + "[" + std::to_string(i) +
                            "] lies outside the open unit disc");
        }
    }
    return out;
}

ProblemFile load_problem(const std::string& path, bool need_targets) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageFail("cannot open input file: " + path);
    std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

    json j;
    try {
        j = json::parse(bytes);
    } catch (const std::exception& e) {
        throw UsageFail("input is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array() ||
        j["points"].empty())
        throw UsageFail("input must be an object with a nonempty \"points\" array");

    ProblemFile pf;
    pf.digest = fnv1a_hex(bytes);
    pf.points = parse_point_array(j["points"], "points");

    if (j.contains("targets")) {
        if (!j["targets"].is_array())
            throw UsageFail("\"targets\" must be an array");
        pf.targets = parse_point_array(j["targets"], "targets");
        if (pf.targets.size() != pf.points.size())
            throw UsageFail("\"targets\" must have the same length as \"points\"");
    }
    if (need_targets && pf.targets.empty())
        throw UsageFail("this command requires a \"targets\" array");

    for (std::size_t i = 0; i < pf.points.size(); ++i)
        for (std::size_t k = i + 1; k < pf.points.size(); ++k)
            if (hypick::coincident(pf.points[i], pf.points[k]))
                throw UsageFail("points[" + std::to_string(i) + "] and points[" +
                                std::to_string(k) + "] coincide");

    if (j.contains("metadata")) {
        if (!j["metadata"].is_object())
            throw UsageFail("\"metadata\" must be an object");
        pf.metadata = j["metadata"];
    }
    return pf;
}

json cj(complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json entry_ref_json(const hypick::TriangleEntryRef& r) {
    return json{{"level", r.level}, {"row", r.row}};
}

json criterion_json(const hypick::CriterionResult& c) {
    json out;
    out["state"] = to_string(c.state);
    if (c.witness)
        out["witness"] = entry_ref_json(*c.witness);
    if (c.partner)
        out["partner_row"] = *c.partner;
    return out;
}

json criteria_json(const hypick::CriteriaRecord& rec) {
    json out;
    out["corner"] = criterion_json(rec.corner);
    out["diagonals"] = criterion_json(rec.diagonals);
    out["all_entries"] = criterion_json(rec.all_entries);
    out["diagonal_pairs"] = criterion_json(rec.diagonal_pairs);
    out["all_pairs"] = criterion_json(rec.all_pairs);
    return out;
}

std::uint64_t effective_seed(const std::optional<std::uint64_t>& flag) {
    if (flag)
        return *flag;
    if (const char* env = std::getenv("HYPICK_SEED")) {
        std::string s(env);
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
            return static_cast<std::uint64_t>(v);
        } catch (const std::exception&) {
            throw UsageFail("HYPICK_SEED must be an unsigned integer, got: " + s);
        }
    }
    return 1;
}

json make_report(const std::string& command, const ProblemFile* pf,
                 std::uint64_t seed) {
    json rep;
    rep["command"] = command;
    rep["inputs_digest"] = pf ? pf->digest : "-";
    rep["seed"] = seed;
    if (pf && !pf->metadata.is_null())
        rep["metadata"] = pf->metadata;
    rep["warnings"] = json::array();
    return rep;
}

void emit(const json& rep) { std::printf("%s\n", rep.dump(2).c_str()); }

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageFail("cannot open csv output file: " + path);
    return out;
}

void csv_row(std::ofstream& out, std::initializer_list<double> vals) {
    bool first = true;
    char buf[32];
    for (double v : vals) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << (first ? "" : ",") << buf;
        first = false;
    }
    out << "\n";
}

// ---------------------------------------------------------------- triangle

int run_triangle(const std::string& input, const std::string& csv_out,
                 std::uint64_t seed) {
    ProblemFile pf = load_problem(input, true);
    const auto tri = hypick::triangle_from_data(pf.points, pf.targets);

    json rep = make_report("triangle", &pf, seed);
    json entries = json::array();
    for (std::size_t k = 0; k < pf.points.size(); ++k)
        for (std::size_t j = k + 1; j <= pf.points.size(); ++j) {
            const auto v = tri.entry(k, j);
            if (!v)
                continue;
            json e;
            e["level"] = k;
            e["row"] = j;
            e["value"] = cj(*v);
            e["modulus"] = std::abs(*v);
            entries.push_back(std::move(e));
        }
    rep["results"]["n"] = pf.points.size();
    rep["results"]["entries"] = std::move(entries);
    if (tri.degenerate_at())
        rep["results"]["degenerate_at"] = entry_ref_json(*tri.degenerate_at());
    else
        rep["results"]["degenerate_at"] = nullptr;

    if (!csv_out.empty()) {
        auto out = open_csv(csv_out);
        out << "# hypick-csv v1 triangle\n";
        out << "level,row,re,im,modulus\n";
        for (std::size_t k = 0; k < pf.points.size(); ++k)
            for (std::size_t j = k + 1; j <= pf.points.size(); ++j) {
                const auto v = tri.entry(k, j);
                if (!v)
                    continue;
                out << k << "," << j << ",";
                csv_row(out, {v->real(), v->imag(), std::abs(*v)});
            }
    }
    emit(rep);
    return 0;
}

// ------------------------------------------------------------------- solve

hypick::SelfMap parse_seed_map(const std::string& text) {
    if (text == "zero")
        return hypick::SelfMap(hypick::ConstantMap(complex(0.0, 0.0)));
    std::istringstream in(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re >> comma >> im) || comma != ',' || !in.eof())
        throw UsageFail("--seed-map expects \"zero\" or \"re,im\"");
    if (std::norm(complex(re, im)) >= 1.0)
        throw UsageFail("--seed-map constant must lie strictly inside the unit disc");
    return hypick::SelfMap(hypick::ConstantMap(complex(re, im)));
}

int run_solve(const std::string& input, const std::string& seed_map_text,
              std::size_t grid, bool emit_samples, const std::string& csv_out,
              std::uint64_t seed) {
    if (emit_samples && csv_out.empty())
        throw UsageFail("--emit-samples requires --csv-out");
    ProblemFile pf = load_problem(input, true);

    const auto tri = hypick::triangle_from_data(pf.points, pf.targets);
    const auto verdict = hypick::theorem_c_criteria(tri);
    const auto pick = hypick::build_pick_matrix(pf.points, pf.targets);
    const auto psd = hypick::is_positive_semidefinite(pick);

    json rep = make_report("solve", &pf, seed);
    json& res = rep["results"];
    res["status"] = to_string(verdict.status);
    res["criteria"] = criteria_json(verdict.criteria);
    res["pick_min_eigenvalue"] = psd.min_eigenvalue;
    res["pick_psd"] = psd.psd;
    if (verdict.witness)
        res["witness"] = entry_ref_json(*verdict.witness);

    const auto denjoy = hypick::denjoy_partial_sums(pf.points, pf.targets);
    json sums = json::array();
    for (double s : denjoy.partial_sums)
        sums.push_back(s);
    res["denjoy_partial_sums"] = std::move(sums);
    if (denjoy.saturated_at)
        res["denjoy_saturated_at"] = *denjoy.saturated_at;

    if (verdict.status == hypick::Solvability::infinitely_many) {
        const hypick::SelfMap seed_map = parse_seed_map(seed_map_text);
        const auto chain = hypick::schur_solve(tri, seed_map);

        double residual = 0.0;
        for (std::size_t i = 0; i < pf.points.size(); ++i)
            residual = std::max(residual, std::abs(chain.value(pf.points[i].value()) -
                                                   pf.targets[i].value()));

        const auto probe = hypick::disc_grid(grid);
        double sup = 0.0;
        for (const auto& z : probe)
            sup = std::max(sup, std::abs(chain.value(z.value())));

        res["interpolant"] = json{{"kind", chain.describe()},
                                  {"seed_map", seed_map_text},
                                  {"residual", residual},
                                  {"grid_points", grid},
                                  {"sup_modulus", sup}};

        if (emit_samples) {
            auto out = open_csv(csv_out);
            out << "# hypick-csv v1 solve-samples\n";
            out << "z_re,z_im,g_re,g_im\n";
            for (const auto& z : probe) {
                const complex g = chain.value(z.value());
                csv_row(out, {z.value().real(), z.value().imag(), g.real(), g.imag()});
            }
        }
        emit(rep);
        return 0;
    }

    if (verdict.status == hypick::Solvability::boundary_unique_candidate) {
        try {
            const auto cand = hypick::boundary_blaschke_candidate(tri);
            if (cand.candidate) {
                const auto& b = *cand.candidate;
                json zeros = json::array();
                for (const auto& a : b.zeros())
                    zeros.push_back(cj(a.value()));
                res["interpolant"] = json{{"kind", "blaschke"},
                                          {"degree", b.degree()},
                                          {"phase", b.phase()},
                                          {"zeros", std::move(zeros)},
                                          {"residual", cand.residual},
                                          {"boundary_level", cand.level}};
                emit(rep);
                return 0;
            }
            res["interpolant"] = nullptr;
            res["boundary_residual"] = cand.residual;
            rep["warnings"].push_back(
                "boundary data is inconsistent with a finite product interpolant");
        } catch (const hypick::DomainError& e) {
            res["interpolant"] = nullptr;
            rep["warnings"].push_back(std::string("boundary extraction failed: ") +
                                      e.what());
        }
        emit(rep);
        return 1;
    }

    emit(rep);
    return 1;
}

// ------------------------------------------------------------------- check

int run_check(const std::string& input, double epsilon, std::size_t order,
              std::size_t tuple_budget, const std::string& permutations,
              std::uint64_t seed) {
    ProblemFile pf = load_problem(input, true);
    if (order < 1 || order + 1 > pf.points.size())
        throw UsageFail("--order must satisfy 1 <= order <= points - 1");

    hypick::CompatibilityOptions opts;
    opts.tuple_budget = tuple_budget;
    opts.seed = seed;
    if (permutations == "all") {
        opts.all_permutations = true;
    } else if (permutations.rfind("sampled:", 0) == 0) {
        const std::string n = permutations.substr(8);
        try {
            std::size_t pos = 0;
            opts.permutation_samples = std::stoul(n, &pos);
            if (pos != n.size() || opts.permutation_samples == 0)
                throw std::invalid_argument(n);
        } catch (const std::exception&) {
            throw UsageFail("--permutations expects \"all\" or \"sampled:N\"");
        }
        opts.all_permutations = false;
    } else {
        throw UsageFail("--permutations expects \"all\" or \"sampled:N\"");
    }

    const auto report =
        hypick::check_compatibility(pf.points, pf.targets, epsilon, order, opts);

    json rep = make_report("check", &pf, seed);
    json& res = rep["results"];
    res["epsilon"] = report.epsilon;
    res["order"] = report.order;
    res["pass"] = report.pass;
    res["worst_ratio"] = report.worst_ratio;
    if (!report.worst.tuple.empty()) {
        json tuple = json::array();
        for (std::size_t ix : report.worst.tuple)
            tuple.push_back(ix);
        res["worst_case"] = json{{"tuple", std::move(tuple)},
                                 {"level", report.worst.level},
                                 {"row_i", report.worst.i},
                                 {"row_j", report.worst.j}};
    }
    res["shortcut_max_modulus"] = report.shortcut_max_modulus;
    res["shortcut_pass"] = report.shortcut_pass;
    res["tuples_checked"] = report.tuples_checked;
    res["permutations_checked"] = report.permutations_checked;
    res["tuples_sampled"] = report.tuples_sampled;
    res["degenerate_cases"] = report.degenerate_cases;
    emit(rep);
    return report.pass ? 0 : 1;
}

// ---------------------------------------------------------------- geometry

int run_geometry(const std::string& input, double eta, std::size_t max_parts,
                 double alpha, double big_m, std::size_t dyadic_depth,
                 std::uint64_t seed) {
    ProblemFile pf = load_problem(input, false);
    if (pf.points.size() < 2)
        throw UsageFail("geometry needs at least two points");

    const auto squares = hypick::dyadic_squares(dyadic_depth);
    const auto report =
        hypick::geometry_report(pf.points, max_parts, eta, squares, big_m, alpha);

    json rep = make_report("geometry", &pf, seed);
    json& res = rep["results"];
    res["separation"] = json{{"constant", report.separation.constant},
                             {"pair", json{{"i", report.separation.i},
                                           {"j", report.separation.j}}}};

    json parts = json::array();
    for (const auto& part : report.decomposition.parts) {
        json members = json::array();
        for (std::size_t ix : part)
            members.push_back(ix);
        parts.push_back(std::move(members));
    }
    res["decomposition"] = json{{"eta", eta},
                                {"feasible", report.decomposition.feasible},
                                {"parts_used", report.decomposition.parts_used},
                                {"minimal_parts", report.decomposition.minimal_parts},
                                {"exact", report.decomposition.exact},
                                {"parts", std::move(parts)}};
    if (!report.decomposition.clique_witness.empty()) {
        json clique = json::array();
        for (std::size_t ix : report.decomposition.clique_witness)
            clique.push_back(ix);
        res["decomposition"]["clique_witness"] = std::move(clique);
    }

    auto slice_json = [](const hypick::SliceCount& s) {
        return json{{"square", s.square},
                    {"slice", s.slice},
                    {"count", s.count},
                    {"allowed", s.allowed}};
    };
    json occupied = json::array();
    for (const auto& s : report.density.occupied)
        occupied.push_back(slice_json(s));
    res["density"] = json{{"alpha", alpha},
                          {"big_m", big_m},
                          {"squares_tested", squares.size()},
                          {"pass", report.density.pass},
                          {"occupied", std::move(occupied)}};
    if (report.density.worst)
        res["density"]["worst"] = slice_json(*report.density.worst);
    if (report.fit)
        res["density_fit_alpha"] = *report.fit;
    else
        res["density_fit_alpha"] = nullptr;

    res["order_bound"] = json{{"order", max_parts},
                              {"pass", report.order.pass},
                              {"decomposable", report.order.decomposition.feasible},
                              {"density_ok", report.order.density.pass}};
    emit(rep);
    return report.order.pass ? 0 : 1;
}

// ---------------------------------------------------------------- sampling

int run_sampling(const std::string& input, const std::string& family_text,
                 std::size_t trials, std::size_t grid, double region_radius,
                 std::optional<double> density_R, double grid_step,
                 const std::string& csv_out, std::uint64_t seed) {
    ProblemFile pf = load_problem(input, false);

    hypick::SamplingFamily family;
    if (family_text == "scaled")
        family = hypick::SamplingFamily::scaled;
    else if (family_text == "blaschke")
        family = hypick::SamplingFamily::blaschke;
    else if (family_text == "conjugated-scaled")
        family = hypick::SamplingFamily::conjugated_scaled;
    else if (family_text == "conjugated-blaschke")
        family = hypick::SamplingFamily::conjugated_blaschke;
    else
        throw UsageFail("--family expects scaled, blaschke, conjugated-scaled, "
                        "or conjugated-blaschke");

    const auto est =
        hypick::estimate_sampling_constant(pf.points, family, trials, grid, seed);

    json rep = make_report("sampling", &pf, seed);
    json& res = rep["results"];
    res["family"] = to_string(family);
    res["trials_used"] = est.trials_used;
    res["skipped"] = est.skipped;
    res["delta_upper_bound_witness"] = est.delta_upper_bound_witness;
    res["worst_function"] = est.worst_function;
    json trial_rows = json::array();
    for (const auto& t : est.trials)
        trial_rows.push_back(json{{"description", t.description},
                                  {"ratio", t.ratio},
                                  {"norm", t.norm},
                                  {"quotient", t.quotient}});
    res["trial_details"] = std::move(trial_rows);

    int status = 0;
    if (density_R) {
        const auto dense =
            hypick::r_dense_check(pf.points, *density_R, region_radius, grid_step);
        res["r_dense"] = json{{"radius", *density_R},
                              {"region_radius", region_radius},
                              {"grid_step", grid_step},
                              {"grid_size", dense.grid_size},
                              {"pass", dense.pass},
                              {"worst_gap", dense.worst_gap},
                              {"worst_grid_point", cj(dense.worst_grid_point.value())}};
        status = dense.pass ? 0 : 1;
    }

    if (!csv_out.empty()) {
        auto out = open_csv(csv_out);
        out << "# hypick-csv v1 sampling-trials\n";
        out << "trial,family,ratio,norm,quotient\n";
        for (std::size_t i = 0; i < est.trials.size(); ++i) {
            const auto& t = est.trials[i];
            out << i << "," << to_string(family) << ",";
            csv_row(out, {t.ratio, t.norm, t.quotient});
        }
    }
    emit(rep);
    return status;
}

// ----------------------------------------------------------------- annulus

int run_annulus(double theta, double radius, std::uint64_t seed) {
    hypick::AnnulusWeight w;
    try {
        w = hypick::annulus_harmonic_weight(theta, radius);
    } catch (const hypick::DomainError& e) {
        throw UsageFail(e.what());
    }
    json rep = make_report("annulus", nullptr, seed);
    rep["results"] = json{{"theta", theta},
                          {"radius", radius},
                          {"omega", w.omega},
                          {"log_num", w.log_num},
                          {"log_den", w.log_den}};
    emit(rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpolation diagnostics for analytic self-maps of the unit disc"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag,
                   "RNG seed (falls back to HYPICK_SEED, then 1)");

    std::string input, csv_out;

    auto* tri = app.add_subcommand("triangle",
                                   "Compute the difference quotient triangle");
    tri->add_option("--input", input, "problem JSON file")->required();
    tri->add_option("--csv-out", csv_out, "write entries as CSV");

    auto* solve = app.add_subcommand("solve", "Classify the data and build an "
                                              "interpolant when one exists");
    std::string seed_map_text = "zero";
    std::size_t solve_grid = 4096;
    bool emit_samples = false;
    solve->add_option("--input", input, "problem JSON file")->required();
    solve->add_option("--seed-map", seed_map_text,
                      "free parameter: \"zero\" or \"re,im\"");
    solve->add_option("--grid", solve_grid, "disc grid size for the sup check")
        ->check(CLI::PositiveNumber);
    solve->add_flag("--emit-samples", emit_samples,
                    "write (z, g(z)) samples to --csv-out");
    solve->add_option("--csv-out", csv_out, "CSV output path");

    auto* check = app.add_subcommand("check",
                                     "Test epsilon-compatibility of the data");
    double epsilon = 0.1;
    std::size_t order = 2, tuple_budget = 200;
    std::string permutations = "sampled:24";
    check->add_option("--input", input, "problem JSON file")->required();
    check->add_option("--epsilon", epsilon, "compatibility constant")->required();
    check->add_option("--order", order, "tuple size")->required();
    check->add_option("--tuple-budget", tuple_budget,
                      "max tuples before sampling kicks in");
    check->add_option("--permutations", permutations,
                      "\"all\" or \"sampled:N\" arrangements per tuple");

    auto* geom = app.add_subcommand("geometry",
                                    "Separation, decomposition, and density");
    double eta = 1.0, alpha = 0.5, big_m = 8.0;
    std::size_t max_parts = 2, dyadic_depth = 12;
    geom->add_option("--input", input, "problem JSON file")->required();
    geom->add_option("--eta", eta, "decomposition separation threshold")
        ->required();
    geom->add_option("--order", max_parts, "maximum number of parts")->required();
    geom->add_option("--alpha", alpha, "density exponent in (0, 1)");
    geom->add_option("--bigM", big_m, "density multiplier");
    geom->add_option("--dyadic-depth", dyadic_depth,
                     "finest dyadic generation to inspect");

    auto* samp = app.add_subcommand("sampling",
                                    "Estimate the sampling ratio over test maps");
    std::string family_text = "scaled";
    std::size_t trials = 16, samp_grid = 48;
    double region_radius = 0.9, grid_step = 0.25;
    std::optional<double> density_R;
    samp->add_option("--input", input, "problem JSON file")->required();
    samp->add_option("--family", family_text,
                     "scaled | blaschke | conjugated-scaled | conjugated-blaschke");
    samp->add_option("--trials", trials, "number of test maps")
        ->check(CLI::PositiveNumber);
    samp->add_option("--grid", samp_grid, "norm grid resolution")
        ->check(CLI::PositiveNumber);
    samp->add_option("--region-radius", region_radius,
                     "hyperbolic radius of the probed region");
    samp->add_option("--density-R", density_R,
                     "also check R-density at this radius");
    samp->add_option("--grid-step", grid_step, "covering grid pitch for R-density");
    samp->add_option("--csv-out", csv_out, "write per-trial rows as CSV");

    auto* ann = app.add_subcommand("annulus",
                                   "Harmonic measure exponent of a split annulus");
    double theta = 1.0, radius = 1.0;
    ann->add_option("--theta", theta, "inner boundary parameter in (0, 2]")
        ->required();
    ann->add_option("--R", radius, "annulus scale, positive")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::uint64_t seed = effective_seed(seed_flag);
        if (tri->parsed())
            return run_triangle(input, csv_out, seed);
        if (solve->parsed())
            return run_solve(input, seed_map_text, solve_grid, emit_samples,
                             csv_out, seed);
        if (check->parsed())
            return run_check(input, epsilon, order, tuple_budget, permutations,
                             seed);
        if (geom->parsed())
            return run_geometry(input, eta, max_parts, alpha, big_m, dyadic_depth,
                                seed);
        if (samp->parsed())
            return run_sampling(input, family_text, trials, samp_grid,
                                region_radius, density_R, grid_step, csv_out,
                                seed);
        if (ann->parsed())
            return run_annulus(theta, radius, seed);
    } catch (const UsageFail& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const hypick::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
