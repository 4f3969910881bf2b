#pragma once

#include "circle.hpp"
#include "eq_extension.hpp"
#include "serialize.hpp"
#include "shearing.hpp"
#include "sweeps.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace shearlab::cli {

inline constexpr std::size_t kDefaultBudget = 64;

enum Exit : int { expected = 0, differs = 1, input_error = 2 };

struct RunConfig {
    std::string command;
    std::string target; // demo kind, context name, ...
    int n = 0;
    int k = 0;
    int m = 4;
    int steps = 3;
    std::size_t budget = kDefaultBudget;
    SearchBounds bounds;
    bool bounds_given = false;
    std::uint64_t seed = 1;
    std::size_t count = 100;
    std::string in, out;
    std::string format = "json";
    bool merged = false;
    std::string fragment = "example";
};

namespace detail {

/** Budget default, overridden by SHEARLAB_BUDGET when set. */
inline std::size_t default_budget() {
    const char* env = std::getenv("SHEARLAB_BUDGET");
    if (!env || !*env) return kDefaultBudget;
    try {
        std::size_t used = 0;
        long long v = std::stoll(env, &used);
        if (used != std::string(env).size() || v < 1) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw InputError("SHEARLAB_BUDGET", "expected a positive integer");
    }
}

inline SearchBounds parse_bounds(const std::string& text) {
    std::vector<std::size_t> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            long long v = std::stoll(item, &used);
            if (used != item.size() || v < 0) throw std::invalid_argument("");
            parts.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw InputError("--bounds", "expected L,S,N with non-negative integers");
        }
    }
    if (parts.size() != 3) throw InputError("--bounds", "expected L,S,N");
    return {parts[0], parts[1], parts[2]};
}

inline json read_json(const std::string& path) {
    if (path.empty()) throw InputError("--in", "an input file is required");
    std::ifstream f(path);
    if (!f) throw InputError("--in", "cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError("--in", std::string("not valid JSON: ") + e.what());
    }
}

inline void render_text(const json& j, std::ostream& os, const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            render_text(value, os, prefix + key + ".");
        } else if (value.is_string()) {
            os << prefix << key << ": " << value.get<std::string>() << "\n";
        } else {
            os << prefix << key << ": " << value.dump() << "\n";
        }
    }
}

inline std::string pair_text(const IndistinguishableResult& r) {
    if (!r.pair) return "none-up-to-bounds";
    return std::to_string(r.pair->first) + "," + std::to_string(r.pair->second);
}

struct Outcome {
    json body;
    bool as_expected = true;
};

inline Outcome demo(const RunConfig& cfg) {
    DemoSpec spec;
    if (cfg.target == "t32") {
        spec.kind = DemoKind::t32;
    } else if (cfg.target == "tnk") {
        spec.kind = DemoKind::tnk;
        spec.n = cfg.n ? cfg.n : 3;
        spec.k = cfg.k ? cfg.k : 2;
        if (!(spec.n > spec.k && spec.k >= 2)) throw InputError("--n/--k", "tnk requires n > k >= 2");
    } else if (cfg.target == "rg-linear") {
        spec.kind = DemoKind::rg_linear;
    } else if (cfg.target == "tn1") {
        spec.kind = DemoKind::tn1_dividing;
        spec.n = cfg.n ? cfg.n : 2;
        spec.m = cfg.m;
        if (spec.n < 2) throw InputError("--n", "tn1 requires n >= 2");
        if (spec.m < 2) throw InputError("--m", "tn1 requires m >= 2");
    } else {
        throw InputError("demo", "expected one of t32, tnk, rg-linear, tn1 (got '" + cfg.target + "')");
    }
    DemoInstance d = build_demo_instance(spec);
    ShearingReport rep = check_shearing(d.instance, d.J);
    json body{{"demo", cfg.target}, {"theory", to_json(d.instance.theory)}, {"instance", to_json(d.instance)},
              {"J", to_json(d.J)}, {"report", to_json(rep)}};
    bool ok = rep.valid();
    switch (spec.kind) {
        case DemoKind::t32:
        case DemoKind::tnk: {
            const auto expected_size = binomial(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.k));
            ok = ok && rep.witness_indices.size() == expected_size && rep.witness_verdict &&
                 rep.witness_verdict->reason == VerdictReason::forbidden_clique &&
                 rep.witness_verdict->witness.size() == static_cast<std::size_t>(spec.n) + 1;
            body["expected_subfamily_size"] = expected_size;
            break;
        }
        case DemoKind::rg_linear:
            ok = ok && rep.witness_indices.size() == 2;
            body["expected_subfamily_size"] = 2;
            break;
        case DemoKind::tn1_dividing: {
            Family fam = instantiate_family(d.instance, d.J);
            std::size_t singles = 0, pairs = 0, pairs_inconsistent = 0;
            for (const auto& dg : fam.diagrams) singles += consistent(dg).consistent;
            for_each_combination(fam.diagrams.size(), 2, [&](const std::vector<std::size_t>& ij) {
                ++pairs;
                pairs_inconsistent += !consistent(conjoin(fam.diagrams, ij)).consistent;
                return true;
            });
            body["singletons_consistent"] = singles;
            body["pairs"] = pairs;
            body["pairs_inconsistent"] = pairs_inconsistent;
            body["expected_subfamily_size"] = spec.n;
            ok = ok && singles == fam.diagrams.size() && rep.witness_indices.size() == static_cast<std::size_t>(spec.n);
            if (spec.n == 2) ok = ok && pairs_inconsistent == pairs;
            break;
        }
    }
    return {body, ok};
}

inline Outcome verify(const RunConfig& cfg) {
    json in = read_json(cfg.in);
    bool expect_valid = true;
    if (in.contains("expect")) {
        std::string e = io::string(in["expect"], "$.expect");
        if (e != "valid" && e != "invalid") throw InputError("$.expect", "expected \"valid\" or \"invalid\"");
        expect_valid = e == "valid";
    }
    const json& ij = in.contains("instance") ? in["instance"] : in;
    const std::string path = in.contains("instance") ? "$.instance" : "$";
    ShearingInstance inst = instance_from_json(ij, path);
    IndexModel J = in.contains("J") ? model_from_json(in["J"], "$.J") : inst.base;
    if (in.contains("J")) {
        try {
            shearlab::detail::require_extension(inst.base, J);
        } catch (const std::invalid_argument& e) {
            throw InputError("$.J", e.what());
        }
    }
    json body{{"instance", to_json(inst)}};
    try {
        if (!in.contains("J")) J = working_model(inst, cfg.budget);
        ShearingReport rep = check_shearing(inst, J);
        body["coherence"] = to_json(CoherenceReport{});
        body["J"] = to_json(J);
        body["report"] = to_json(rep);
        return {body, rep.valid() == expect_valid};
    } catch (const IncoherentLabeling& e) {
        body["coherence"] = to_json(e.report);
        body["report"] = nullptr;
        return {body, false};
    }
}

inline IndexModel context_base(const std::string& name, int size) {
    std::vector<Rational> pts;
    for (int i = 0; i < size; ++i) pts.emplace_back(i);
    if (name == "dense") return singleton_predicate_cut(ClassDescriptor::linear_orders(), pts);
    if (name == "singleton") return singleton_predicate_cut(ClassDescriptor::with_predicates(), pts);
    throw InputError("context", "expected \"dense\" or \"singleton\" (got '" + name + "')");
}

inline Outcome search_circle(const RunConfig& cfg) {
    SearchBounds b = cfg.bounds_given ? cfg.bounds : SearchBounds{2, cfg.target == "singleton" ? std::size_t(2) : 0, 8};
    IndexModel base = context_base(cfg.target, cfg.m);
    CircleSearchResult res = search_circle_witness(base.cls(), base, b);
    json body{{"context", cfg.target}, {"base", to_json(base)}, {"search", to_json(res)}};
    bool expect_found = cfg.target == "dense";
    body["expected"] = expect_found ? "witness" : "none-up-to-bounds";
    return {body, res.witness.has_value() == expect_found};
}

inline Outcome chain(const RunConfig& cfg) {
    int n = cfg.n ? cfg.n : 3, k = cfg.k ? cfg.k : 2;
    if (!(n > k && k >= 2)) throw InputError("--n/--k", "chain requires n > k >= 2");
    if (cfg.steps < 1) throw InputError("--steps", "expected a positive integer");
    UnsuperstableChain c = build_unsuperstable_chain(n, k, cfg.steps);
    if (cfg.merged) c = with_merged_pools(std::move(c));
    ChainReport rep = verify_chain(c);
    json body{{"n", n}, {"k", k}, {"steps", cfg.steps}, {"merged_pools", cfg.merged}, {"J", to_json(c.J)}, {"report", to_json(rep)}};
    return {body, rep.unsuperstable()};
}

inline std::vector<Tuple> tuples_up_to(const std::vector<VertexId>& elements, std::size_t max_len) {
    std::vector<Tuple> out{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        Tuple cur(len);
        auto rec = [&](auto&& self, std::size_t p) -> void {
            if (p == len) {
                out.push_back(cur);
                return;
            }
            for (auto e : elements) {
                cur[p] = e;
                self(self, p + 1);
            }
        };
        rec(rec, 0);
    }
    return out;
}

inline Outcome eq(const RunConfig& cfg) {
    IndexModel base = context_base(cfg.target, cfg.m);
    std::vector<InvariantRelation> rels;
    if (cfg.fragment == "example")
        rels = {tuple_relation(base, 2, {{0, 0}}), tuple_relation(base, 2, {{1, 1}})};
    else if (cfg.fragment == "coordinates")
        rels = coordinate_equivalences(base, 2);
    else if (cfg.fragment == "none")
        rels = {};
    else
        throw InputError("--fragment", "expected example, coordinates or none");
    EqExtension ext = build_eq_extension(base, rels);
    const std::size_t max_s = cfg.bounds_given ? cfg.bounds.S : 2;
    std::size_t tested = 0, with_pair = 0;
    json samples = json::array();
    for (const auto& s : tuples_up_to(ext.elements(), max_s)) {
        ++tested;
        IndistinguishableResult r = find_indistinguishable_pair(ext, s);
        with_pair += r.pair.has_value();
        if (s.size() <= 1 && samples.size() < 8) samples.push_back({{"s", s}, {"pair", pair_text(r)}});
    }
    json body{{"context", cfg.target},
              {"fragment", cfg.fragment},
              {"extension", to_json(ext)},
              {"max_s", max_s},
              {"tested", tested},
              {"with_pair", with_pair},
              {"samples", samples}};
    bool ok = cfg.target == "dense" ? with_pair == tested : with_pair == 0;
    body["expected"] = cfg.target == "dense" ? "pair for every s" : "none-up-to-bounds for every s";
    return {body, ok};
}

inline Outcome oracle(const RunConfig& cfg) {
    json in = read_json(cfg.in);
    std::optional<bool> expect;
    if (in.contains("expect")) {
        std::string e = io::string(in["expect"], "$.expect");
        if (e != "consistent" && e != "inconsistent") throw InputError("$.expect", "expected \"consistent\" or \"inconsistent\"");
        expect = e == "consistent";
    }
    const json& dj = in.contains("diagram") ? in["diagram"] : in;
    Diagram d = diagram_from_json(dj, in.contains("diagram") ? "$.diagram" : "$");
    ConsistencyVerdict v = consistent(d);
    Realization real = realize_in_model(d);
    json body{{"diagram", to_json(d)}, {"verdict", to_json(v)}};
    if (real.model) {
        json edges = json::array();
        for (const auto& e : real.model->edges) edges.push_back(e);
        json assignment = json::object();
        for (const auto& [t, v2] : real.model->assignment) assignment[term_name(t)] = v2;
        body["model"] = {{"size", real.model->size}, {"assignment", assignment}, {"edges", edges}};
    } else {
        body["model"] = nullptr;
    }
    return {body, !expect || *expect == v.consistent};
}

inline Outcome roundtrip(const RunConfig& cfg) {
    RoundTripStats st = sweep_circle_round_trip(cfg.count, cfg.seed);
    // the linear-order witness from the rg-linear demo goes first
    DemoInstance d = build_demo_instance({DemoKind::rg_linear});
    IndexModel J = duplicate_realizations(d.J, d.instance.s, d.instance.t, 8);
    RoundTripStats example;
    round_trip_one(linear_order_witness(J, d.instance.t), J, example, "linear-order witness", cfg.budget);
    json body{{"seed", cfg.seed},
              {"example", {{"ok", example.ok()}, {"failures", example.failures}}},
              {"contexts", st.contexts},
              {"witnesses", st.witnesses},
              {"shearing_valid", st.shearing_valid},
              {"strong_pairwise", st.strong_pairwise},
              {"recovered", st.recovered},
              {"same_relations", st.same_relations},
              {"failures", st.failures}};
    return {body, st.ok() && example.ok() && st.witnesses >= cfg.count};
}

/** T_{n,k} shearing next to the random-graph sweep over the same index context. */
inline Outcome separate(const RunConfig& cfg) {
    json hyper = json::array();
    bool hyper_ok = true;
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 2}, {4, 3}, {5, 2}}) {
        DemoInstance d = build_demo_instance({DemoKind::tnk, n, k});
        ShearingReport rep = check_shearing(d.instance, d.J);
        ChainReport ch = verify_chain(build_unsuperstable_chain(n, k, cfg.steps));
        bool ok = rep.valid() && rep.witness_indices.size() == binomial(static_cast<std::size_t>(n), static_cast<std::size_t>(k)) &&
                  ch.unsuperstable();
        hyper_ok = hyper_ok && ok;
        hyper.push_back({{"n", n},
                         {"k", k},
                         {"shears", rep.valid()},
                         {"subfamily_size", rep.witness_indices.size()},
                         {"clique", to_json(rep.witness_verdict ? rep.witness_verdict->witness : std::vector<Term>{})},
                         {"chain_unsuperstable", ch.unsuperstable()}});
    }
    CollisionSweepStats st = sweep_collisions({});
    json rg{{"models", st.models},
            {"labelings", st.labelings},
            {"instances", st.instances},
            {"family_inconsistent", st.family_inconsistent},
            {"single_inconsistent", st.single_inconsistent},
            {"single_after_closure", st.single_after_closure},
            {"derivations", st.derivations},
            {"with_crossings", st.with_crossings},
            {"counterexamples", st.counterexamples},
            {"failures", st.failures}};
    bool rg_ok = st.counterexamples == 0 && st.single_after_closure == st.family_inconsistent;
    json body{{"context", "c_{3,2}"},
              {"T_nk", {{"verdict", hyper_ok ? "shearing" : "no shearing found"}, {"cases", hyper}}},
              {"random_graph", {{"verdict", rg_ok ? "no shearing in swept fragment" : "counterexample"}, {"sweep", rg}}}};
    return {body, hyper_ok && rg_ok};
}

} // namespace detail

/** Runs one command; the report goes to `out` (or --out), diagnostics to `err`. */
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"shear-lab: shearing in the random graph and in generic clique-free hypergraphs"};
    app.require_subcommand(1);
    std::string bounds_text;
    std::optional<long long> budget;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--budget", budget, "extension budget (default 64 or SHEARLAB_BUDGET)");
        sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--out", cfg.out, "write the report here instead of stdout");
        sub->add_option("--seed", cfg.seed, "seed for randomized sweeps");
    };
    auto* demo = app.add_subcommand("demo", "build and check a named shearing instance");
    demo->add_option("kind", cfg.target, "t32 | tnk | rg-linear | tn1")->required();
    demo->add_option("--n", cfg.n);
    demo->add_option("--k", cfg.k);
    demo->add_option("--m", cfg.m, "number of base points for tn1");
    common(demo);
    auto* verify = app.add_subcommand("verify", "check a ShearingInstance JSON file");
    verify->add_option("--in", cfg.in)->required();
    common(verify);
    auto* search = app.add_subcommand("search-circle", "bounded search for a circle witness");
    search->add_option("context", cfg.target, "dense | singleton")->required();
    search->add_option("--bounds", bounds_text, "L,S,N");
    search->add_option("--m", cfg.m, "number of base points");
    common(search);
    auto* chain = app.add_subcommand("chain", "build and verify an unsuperstability chain");
    chain->add_option("--n", cfg.n);
    chain->add_option("--k", cfg.k);
    chain->add_option("--steps", cfg.steps);
    chain->add_flag("--merged-pools", cfg.merged, "reuse the first step's copies in every step");
    common(chain);
    auto* eq = app.add_subcommand("eq", "eq-extension and indistinguishable pairs over every s up to --bounds S");
    eq->add_option("context", cfg.target, "dense | singleton")->required();
    eq->add_option("--fragment", cfg.fragment, "example | coordinates | none");
    eq->add_option("--bounds", bounds_text, "L,S,N (S bounds |s|)");
    eq->add_option("--m", cfg.m, "number of base points");
    common(eq);
    auto* oracle = app.add_subcommand("oracle", "evaluate a Diagram JSON file");
    oracle->add_option("--in", cfg.in)->required();
    common(oracle);
    auto* roundtrip = app.add_subcommand("roundtrip", "seeded circle/shearing round trips");
    roundtrip->add_option("--count", cfg.count);
    common(roundtrip);
    auto* separate = app.add_subcommand("separate", "T_nk shearing next to the random-graph sweep");
    separate->add_option("--steps", cfg.steps);
    common(separate);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return Exit::expected;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Exit::input_error;
    }
    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (budget && *budget < 1) throw InputError("--budget", "expected a positive integer");
        cfg.budget = budget ? static_cast<std::size_t>(*budget) : detail::default_budget();
        if (!bounds_text.empty()) {
            cfg.bounds = detail::parse_bounds(bounds_text);
            cfg.bounds_given = true;
        }
        if (cfg.m < 1) throw InputError("--m", "expected a positive integer");
        detail::Outcome o;
        if (cfg.command == "demo")
            o = detail::demo(cfg);
        else if (cfg.command == "verify")
            o = detail::verify(cfg);
        else if (cfg.command == "search-circle")
            o = detail::search_circle(cfg);
        else if (cfg.command == "chain")
            o = detail::chain(cfg);
        else if (cfg.command == "eq")
            o = detail::eq(cfg);
        else if (cfg.command == "oracle")
            o = detail::oracle(cfg);
        else if (cfg.command == "roundtrip")
            o = detail::roundtrip(cfg);
        else
            o = detail::separate(cfg);
        json rep = report(cfg.command, std::move(o.body));
        rep["budget"] = cfg.budget;
        rep["verdict"] = o.as_expected ? "expected" : "differs";
        std::ostringstream text;
        if (cfg.format == "json")
            text << rep.dump(2) << "\n";
        else
            detail::render_text(rep, text);
        if (cfg.out.empty()) {
            out << text.str();
        } else {
            std::ofstream f(cfg.out);
            if (!f) throw InputError("--out", "cannot write " + cfg.out);
            f << text.str();
        }
        return o.as_expected ? Exit::expected : Exit::differs;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return Exit::input_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return Exit::input_error;
    }
}

inline int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace shearlab::cli
