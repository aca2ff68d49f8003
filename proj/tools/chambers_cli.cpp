// Command-line front end: computes Whitney numbers, characteristic
// polynomials, chamber counts, and run reports for arrangements loaded from
// JSON files, matrix files, or the built-in families.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <chambers/automorphism.hpp>
#include <chambers/engine.hpp>
#include <chambers/families.hpp>

namespace {

using namespace chambers;
using ordered_json = nlohmann::ordered_json;

struct invalid_group_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

ordered_json parse_json_document(const std::string& text, const std::string& path) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // the library message already carries line and column; drop its
        // bracketed exception id and add the file name
        std::string msg = e.what();
        if (size_t cut = msg.find("] "); cut != std::string::npos) msg = msg.substr(cut + 2);
        throw error(path + ": " + msg);
    }
}

FieldScalar scalar_from_json(const ordered_json& v, unsigned long field, const std::string& what) {
    if (v.is_number_integer()) return FieldScalar::parse(std::to_string(v.get<long long>()), field);
    if (v.is_string()) return FieldScalar::parse(v.get<std::string>(), field);
    throw error(what + ": expected a string or an integer");
}

unsigned long field_from_json(const ordered_json& doc) {
    if (!doc.contains("field")) return 0;
    const auto& f = doc.at("field");
    if (f.is_string() && f.get<std::string>() == "Q") return 0;
    if (f.is_object() && f.contains("sqrt") && f.at("sqrt").is_number_unsigned())
        return f.at("sqrt").get<unsigned long>();
    throw error("\"field\" must be \"Q\" or {\"sqrt\": m}");
}

Arrangement arrangement_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw error("input must be a JSON object");
    if (!doc.contains("dim") || !doc.at("dim").is_number_unsigned())
        throw error("\"dim\" must be a non-negative integer");
    const auto dim = doc.at("dim").get<unsigned>();
    const unsigned long field = field_from_json(doc);
    if (!doc.contains("hyperplanes") || !doc.at("hyperplanes").is_array())
        throw error("\"hyperplanes\" must be an array");

    std::vector<Hyperplane> rows;
    size_t idx = 0;
    for (const auto& h : doc.at("hyperplanes")) {
        const std::string where = "hyperplane " + std::to_string(idx);
        if (!h.is_object() || !h.contains("coeffs") || !h.at("coeffs").is_array())
            throw error(where + ": expected {\"coeffs\": [...], \"constant\": ...}");
        std::vector<FieldScalar> coeffs;
        size_t cidx = 0;
        for (const auto& c : h.at("coeffs"))
            coeffs.push_back(scalar_from_json(c, field, where + ", coeff " + std::to_string(cidx++)));
        FieldScalar constant = h.contains("constant")
                                   ? scalar_from_json(h.at("constant"), field, where + ", constant")
                                   : FieldScalar::zero(field);
        rows.push_back({std::move(coeffs), std::move(constant)});
        ++idx;
    }
    return Arrangement(dim, field, std::move(rows));
}

PermGroup group_from_json(const ordered_json& arr, size_t n, const std::string& what) {
    if (!arr.is_array()) throw error(what + ": expected an array of one-line permutations");
    std::vector<Perm> gens;
    size_t idx = 0;
    for (const auto& g : arr) {
        const std::string where = what + ", generator " + std::to_string(idx++);
        if (!g.is_array()) throw error(where + ": expected an array of 1-based images");
        std::vector<long> images;
        for (const auto& v : g) {
            if (!v.is_number_integer()) throw error(where + ": expected integers");
            images.push_back(v.get<long>());
        }
        if (images.size() != n)
            throw error(where + ": degree " + std::to_string(images.size()) + " does not match " +
                        std::to_string(n) + " hyperplanes");
        gens.push_back(Perm::from_one_line_1based(images));
    }
    if (n > 65535) throw error("too many hyperplanes for a permutation group");
    return gens.empty() ? PermGroup(static_cast<unsigned>(n))
                        : PermGroup(static_cast<unsigned>(n), gens);
}

/// Matrix import per the column convention: a d x n block whose column i
/// holds the coefficients of hyperplane i, then n constant terms.
Arrangement arrangement_from_matrix(const std::string& path, unsigned long field) {
    std::istringstream in(read_file(path));
    auto next = [&](const std::string& what) {
        std::string tok;
        if (!(in >> tok)) throw error(path + ": unexpected end of file, expected " + what);
        return tok;
    };
    auto next_unsigned = [&](const std::string& what) {
        const std::string tok = next(what);
        try {
            size_t used = 0;
            unsigned long v = std::stoul(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw error(path + ": expected " + what + ", got '" + tok + "'");
        }
    };

    const unsigned long d = next_unsigned("the dimension");
    const unsigned long n = next_unsigned("the number of hyperplanes");
    std::vector<Hyperplane> rows(n);
    for (unsigned long i = 0; i < n; ++i) rows[i].coeffs.resize(d, FieldScalar::zero(field));
    for (unsigned long r = 0; r < d; ++r)
        for (unsigned long c = 0; c < n; ++c) {
            const std::string what =
                "coefficient (" + std::to_string(r) + ", " + std::to_string(c) + ")";
            rows[c].coeffs[r] = FieldScalar::parse(next(what), field);
        }
    for (unsigned long c = 0; c < n; ++c)
        rows[c].constant = FieldScalar::parse(next("constant " + std::to_string(c)), field);
    std::string extra;
    if (in >> extra) throw error(path + ": trailing token '" + extra + "'");
    return Arrangement(static_cast<unsigned>(d), field, std::move(rows));
}

FamilyInstance family_from_tokens(const std::vector<std::string>& tokens) {
    if (tokens.empty())
        throw error("gen needs a family name: threshold, resonance, crosspolytope, "
                    "permutohedron, demicube, discriminantal, icosahedron, dodecahedron, cell24");
    const std::string& name = tokens[0];
    auto param = [&](size_t i, const std::string& what) -> unsigned {
        if (i >= tokens.size()) throw error(name + " needs " + what);
        try {
            size_t used = 0;
            unsigned long v = std::stoul(tokens[i], &used);
            if (used != tokens[i].size() || v > 1000000) throw std::invalid_argument(tokens[i]);
            return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw error(name + ": expected " + what + ", got '" + tokens[i] + "'");
        }
    };
    auto arity = [&](size_t n) {
        if (tokens.size() > n + 1)
            throw error(name + ": unexpected argument '" + tokens[n + 1] + "'");
    };

    if (name == "threshold") { arity(1); return threshold_family(param(1, "a dimension")); }
    if (name == "resonance") { arity(1); return resonance_family(param(1, "a dimension")); }
    if (name == "crosspolytope") { arity(1); return crosspolytope_family(param(1, "a dimension")); }
    if (name == "permutohedron") { arity(1); return permutohedron_family(param(1, "a dimension")); }
    if (name == "demicube") { arity(1); return demicube_family(param(1, "a dimension")); }
    if (name == "discriminantal") {
        // an optional third parameter (point seed) is accepted for
        // compatibility and ignored: the points are always the moment curve
        if (tokens.size() == 4) param(3, "a seed");
        else arity(2);
        unsigned d = param(1, "a dimension");
        return discriminantal_family(d, param(2, "a point count"));
    }
    if (name == "icosahedron" || name == "dodecahedron" || name == "cell24") {
        arity(0);
        return platonic_family(name);
    }
    throw error("unknown family '" + name +
                "' (expected threshold, resonance, crosspolytope, permutohedron, demicube, "
                "discriminantal, icosahedron, dodecahedron, cell24)");
}

struct SourceFlags {
    std::vector<std::string> gen_tokens;
    std::string input_path;
    std::string matrix_path;
    std::string group_path;
    unsigned long matrix_field = 0;
};

struct EngineFlags {
    std::string engine = "symmetry";
    std::string orbit = "pseudo";
    unsigned threads = 1;
    uint64_t seed = 0;
    bool no_central_shortcut = false;
};

struct Loaded {
    Arrangement arrangement;
    std::optional<PermGroup> group;
    bool group_needs_validation = false;
    std::string family_name;
};

void add_source_flags(CLI::App* sub, SourceFlags& src) {
    sub->add_option("source", src.gen_tokens,
                    "gen <family> <params...> to use a built-in family");
    sub->add_option("--input", src.input_path, "arrangement JSON file");
    sub->add_option("--matrix", src.matrix_path, "matrix file: d n, d rows of n coefficients "
                                                 "(hyperplanes as columns), n constants");
    sub->add_option("--field", src.matrix_field,
                    "square-free m for Q(sqrt(m)) scalars in --matrix files; 0 means Q");
    sub->add_option("--group", src.group_path, "JSON file with one-line 1-based generators");
}

void add_engine_flags(CLI::App* sub, EngineFlags& eng, bool fixed_symmetry) {
    if (!fixed_symmetry)
        sub->add_option("--engine", eng.engine, "counting engine")
            ->check(CLI::IsMember({"simple", "extended", "symmetry"}))
            ->capture_default_str();
    sub->add_option("--orbit-id", eng.orbit, "orbit identification mode")
        ->check(CLI::IsMember({"pseudo", "exact", "none"}))
        ->capture_default_str();
    sub->add_option("--threads", eng.threads, "worker threads")->capture_default_str();
    sub->add_option("--seed", eng.seed, "seed for the orbit heuristics")->capture_default_str();
    sub->add_flag("--no-central-shortcut", eng.no_central_shortcut,
                  "disable the last-level shortcut for central arrangements");
}

Loaded load_source(const SourceFlags& src) {
    const bool has_gen = !src.gen_tokens.empty();
    const int sources = int(has_gen) + int(!src.input_path.empty()) + int(!src.matrix_path.empty());
    if (sources != 1)
        throw error("need exactly one source: 'gen <family> <params>', --input, or --matrix");

    std::optional<Loaded> loaded;
    if (has_gen) {
        if (src.gen_tokens[0] != "gen")
            throw error("unexpected argument '" + src.gen_tokens[0] + "' (did you mean 'gen'?)");
        FamilyInstance inst = family_from_tokens(
            {src.gen_tokens.begin() + 1, src.gen_tokens.end()});
        loaded = Loaded{std::move(inst.arrangement), std::move(inst.group), false, inst.name};
    } else if (!src.input_path.empty()) {
        ordered_json doc = parse_json_document(read_file(src.input_path), src.input_path);
        Arrangement A = arrangement_from_json(doc);
        std::optional<PermGroup> G;
        if (doc.contains("group")) {
            G = group_from_json(doc.at("group"), A.size(), src.input_path + ": \"group\"");
        }
        loaded = Loaded{std::move(A), std::move(G), true, ""};
    } else {
        loaded = Loaded{arrangement_from_matrix(src.matrix_path, src.matrix_field), std::nullopt,
                        false, ""};
    }

    if (!src.group_path.empty()) {
        ordered_json doc = parse_json_document(read_file(src.group_path), src.group_path);
        loaded->group = group_from_json(doc, loaded->arrangement.size(), src.group_path);
        loaded->group_needs_validation = true;
    }
    if (!loaded->group) loaded->group_needs_validation = false;

    const size_t dups = loaded->arrangement.duplicate_groups().size();
    if (dups > 0 && !has_gen)
        std::cerr << "note: the input contains " << dups
                  << " group(s) of duplicate hyperplanes; they are counted once\n";
    return std::move(*loaded);
}

/// Exhaustive check when the subset budget allows it, sampled otherwise.
ValidationResult validate_adaptively(const PermGroup& G, const Arrangement& A) {
    try {
        return validate_subgroup_of_aut(G, A, ValidationMode::EXHAUSTIVE);
    } catch (const error& e) {
        if (std::string(e.what()).find("sampled") == std::string::npos) throw;
        return validate_subgroup_of_aut(G, A, ValidationMode::SAMPLED);
    }
}

void require_valid_group(const Loaded& loaded) {
    if (!loaded.group_needs_validation) return;
    ValidationResult res = validate_adaptively(*loaded.group, loaded.arrangement);
    if (!res.ok) {
        std::ostringstream msg;
        msg << "the supplied group is not an automorphism group: " << res.reason
            << " (witness subset:";
        for (uint16_t i : res.subset) msg << ' ' << i;
        msg << ")";
        throw invalid_group_error(msg.str());
    }
}

EngineOptions engine_options(const EngineFlags& eng) {
    EngineOptions opts;
    opts.orbit_id = eng.orbit == "pseudo" ? OrbitId::PSEUDO
                    : eng.orbit == "exact" ? OrbitId::EXACT
                                           : OrbitId::NONE;
    opts.threads = eng.threads;
    opts.seed = eng.seed;
    opts.central_shortcut = !eng.no_central_shortcut;
    return opts;
}

SymmetryResult run_symmetry(const Loaded& loaded, const EngineFlags& eng) {
    require_valid_group(loaded);
    const PermGroup trivial(static_cast<unsigned>(loaded.arrangement.size()));
    const PermGroup& G = loaded.group ? *loaded.group : trivial;
    return whitney_symmetry(loaded.arrangement, G, engine_options(eng));
}

WhitneyVector run_whitney(const Loaded& loaded, const EngineFlags& eng) {
    if (eng.engine == "simple") return whitney_simple(loaded.arrangement);
    if (eng.engine == "extended") return whitney_extended(loaded.arrangement);
    return run_symmetry(loaded, eng).whitney;
}

ordered_json whitney_json(const Arrangement& A, const WhitneyVector& w) {
    ordered_json out;
    out["dim"] = A.dim();
    ordered_json bs = ordered_json::array();
    for (const Count& b : w.b) bs.push_back(b.str());
    out["whitney"] = std::move(bs);
    out["chambers"] = number_of_chambers(w).str();
    return out;
}

ordered_json charpoly_json(const CharPoly& p) {
    ordered_json out;
    out["dim"] = p.dim;
    ordered_json cs = ordered_json::array();
    for (const mpz_class& c : p.coeff) cs.push_back(c.get_str());
    out["coefficients"] = std::move(cs);
    out["display"] = p.str();
    return out;
}

ordered_json report_json(const RunReport& r) {
    ordered_json out;
    ordered_json levels = ordered_json::array();
    for (const LevelReport& row : r.levels) {
        ordered_json l;
        l["level"] = row.level;
        l["entered"] = row.entered;
        l["identifications"] = row.identifications;
        l["restrictions"] = row.restrictions;
        l["parked"] = row.parked;
        l["terminal"] = row.terminal;
        l["wall_ms"] = row.wall_ms;
        levels.push_back(std::move(l));
    }
    out["levels"] = std::move(levels);
    out["peak_level_size"] = r.peak_level_size;
    out["total_nodes"] = r.total_nodes;
    out["chambers"] = r.terminal_total.str();
    out["total_wall_ms"] = r.total_wall_ms;
    return out;
}

ordered_json instance_json(const Loaded& loaded) {
    const Arrangement& A = loaded.arrangement;
    ordered_json out;
    if (!loaded.family_name.empty()) out["name"] = loaded.family_name;
    out["dim"] = A.dim();
    if (A.field() == 0)
        out["field"] = "Q";
    else
        out["field"] = ordered_json{{"sqrt", A.field()}};
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < A.size(); ++i) {
        ordered_json h;
        ordered_json coeffs = ordered_json::array();
        for (const FieldScalar& c : A[i].coeffs) coeffs.push_back(c.str());
        h["coeffs"] = std::move(coeffs);
        h["constant"] = A[i].constant.str();
        rows.push_back(std::move(h));
    }
    out["hyperplanes"] = std::move(rows);
    if (loaded.group) {
        ordered_json gens = ordered_json::array();
        for (const Perm& g : loaded.group->generators()) {
            ordered_json images = ordered_json::array();
            for (uint16_t i = 0; i < g.degree(); ++i) images.push_back(g(i) + 1);
            gens.push_back(std::move(images));
        }
        out["group"] = std::move(gens);
    }
    return out;
}

void print_report_plain(const RunReport& r) {
    std::cout << "level  entered  identifications  restrictions  parked  terminal  wall_ms\n";
    for (const LevelReport& row : r.levels) {
        std::ostringstream line;
        line << row.level << '\t' << row.entered << '\t' << row.identifications << '\t'
             << row.restrictions << '\t' << row.parked << '\t' << row.terminal << '\t'
             << row.wall_ms;
        std::cout << line.str() << '\n';
    }
    std::cout << "peak_level_size " << r.peak_level_size << '\n';
    std::cout << "total_nodes " << r.total_nodes << '\n';
    std::cout << "chambers " << r.terminal_total.str() << '\n';
    std::cout << "total_wall_ms " << r.total_wall_ms << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"Exact Whitney numbers, characteristic polynomials, and chamber counts "
                 "of hyperplane arrangements, with symmetry-aware counting"};
    app.require_subcommand(1);
    std::string format = "plain";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"plain", "json"}))
        ->capture_default_str();

    struct Cmd {
        CLI::App* sub = nullptr;
        SourceFlags src;
        EngineFlags eng;
    };
    Cmd whitney, charpoly, chambers_cmd, report, gen, validate;

    whitney.sub = app.add_subcommand("whitney", "print the Whitney numbers b_0..b_d");
    charpoly.sub = app.add_subcommand("charpoly", "print the characteristic polynomial");
    chambers_cmd.sub = app.add_subcommand("chambers", "print the number of chambers");
    report.sub = app.add_subcommand("report", "print per-level statistics of a symmetry run");
    gen.sub = app.add_subcommand("gen", "emit a built-in family instance as JSON");
    validate.sub = app.add_subcommand("validate-group",
                                      "check that the supplied group is an automorphism group");

    for (Cmd* cmd : {&whitney, &charpoly, &chambers_cmd}) {
        add_source_flags(cmd->sub, cmd->src);
        add_engine_flags(cmd->sub, cmd->eng, false);
    }
    add_source_flags(report.sub, report.src);
    add_engine_flags(report.sub, report.eng, true);

    std::vector<std::string> gen_tokens;
    gen.sub->add_option("family", gen_tokens, "family name and parameters")->required();

    add_source_flags(validate.sub, validate.src);

    // global flags are accepted after the subcommand too
    for (CLI::App* sub : {whitney.sub, charpoly.sub, chambers_cmd.sub, report.sub, gen.sub,
                          validate.sub})
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"plain", "json"}));

    CLI11_PARSE(app, argc, argv);

    if (whitney.sub->parsed()) {
        Loaded loaded = load_source(whitney.src);
        WhitneyVector w = run_whitney(loaded, whitney.eng);
        if (format == "json")
            std::cout << whitney_json(loaded.arrangement, w).dump(2) << '\n';
        else
            std::cout << w.str() << '\n';
    } else if (charpoly.sub->parsed()) {
        Loaded loaded = load_source(charpoly.src);
        CharPoly p = characteristic_polynomial(run_whitney(loaded, charpoly.eng));
        if (format == "json")
            std::cout << charpoly_json(p).dump(2) << '\n';
        else
            std::cout << p.str() << '\n';
    } else if (chambers_cmd.sub->parsed()) {
        Loaded loaded = load_source(chambers_cmd.src);
        Count c = number_of_chambers(run_whitney(loaded, chambers_cmd.eng));
        if (format == "json")
            std::cout << ordered_json{{"chambers", c.str()}}.dump(2) << '\n';
        else
            std::cout << c.str() << '\n';
    } else if (report.sub->parsed()) {
        Loaded loaded = load_source(report.src);
        SymmetryResult res = run_symmetry(loaded, report.eng);
        if (format == "json")
            std::cout << report_json(res.report).dump(2) << '\n';
        else
            print_report_plain(res.report);
    } else if (gen.sub->parsed()) {
        FamilyInstance inst = family_from_tokens(gen_tokens);
        Loaded loaded{std::move(inst.arrangement), std::move(inst.group), false, inst.name};
        std::cout << instance_json(loaded).dump(2) << '\n';
    } else if (validate.sub->parsed()) {
        Loaded loaded = load_source(validate.src);
        if (!loaded.group) throw error("validate-group needs a group (--group or \"group\" key)");
        ValidationResult res = validate_adaptively(*loaded.group, loaded.arrangement);
        if (!res.ok) {
            std::ostringstream msg;
            msg << res.reason << " (witness subset:";
            for (uint16_t i : res.subset) msg << ' ' << i;
            msg << ")";
            throw invalid_group_error(msg.str());
        }
        if (format == "json")
            std::cout << ordered_json{{"valid", true}, {"order", loaded.group->order().str()}}
                             .dump(2)
                      << '\n';
        else
            std::cout << "valid (group order " << loaded.group->order().str() << ")\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const invalid_group_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
