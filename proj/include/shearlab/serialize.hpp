#pragma once

#include "circle.hpp"
#include "eq_extension.hpp"
#include "self_collision.hpp"
#include "shearing.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace shearlab {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "shear-lab/1";

/** Malformed input; `field` is the JSON path of the offending value. */
class InputError : public std::invalid_argument {
public:
    InputError(std::string field, const std::string& what)
        : std::invalid_argument("field " + field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

namespace io {

inline const json& at(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw InputError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(path + "." + key, "missing");
    return *it;
}

inline std::string child(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InputError(path, "expected an integer");
    return j.get<std::int64_t>();
}

inline std::uint64_t natural(const json& j, const std::string& path) {
    auto v = integer(j, path);
    if (v < 0) throw InputError(path, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

inline bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw InputError(path, "expected a boolean");
    return j.get<bool>();
}

inline std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw InputError(path, "expected a string");
    return j.get<std::string>();
}

inline const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array");
    return j;
}

inline Rational rational(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    try {
        return parse_rational(string(j, path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path, e.what());
    }
}

template <class T, class F>
std::vector<T> list(const json& j, const std::string& path, F&& f) {
    std::vector<T> out;
    std::size_t i = 0;
    for (const auto& x : array(j, path)) {
        out.push_back(f(x, child(path, i)));
        ++i;
    }
    return out;
}

inline std::vector<std::size_t> indices(const json& j, const std::string& path) {
    return list<std::size_t>(j, path, [](const json& x, const std::string& p) { return static_cast<std::size_t>(natural(x, p)); });
}

inline VertexId vertex_id(const json& j, const std::string& path) {
    auto v = natural(j, path);
    if (v > 0xffffffffu) throw InputError(path, "vertex id out of range");
    return static_cast<VertexId>(v);
}

inline Tuple tuple(const json& j, const std::string& path) { return list<VertexId>(j, path, vertex_id); }

inline std::string hex_code(const json& j, const std::string& path) {
    try {
        return QfType::from_hex(string(j, path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path, e.what());
    }
}

} // namespace io

// ---- structures ----

inline json to_json(const ClassDescriptor& c) {
    json j{{"kind", kind_name(c.kind)}};
    if (c.has_edges()) {
        j["k"] = c.k;
        j["n"] = c.n;
        j["edge_arity"] = c.edge_arity();
        j["clique_bound"] = c.clique_bound();
    }
    return j;
}

inline ClassDescriptor class_from_json(const json& j, const std::string& path) {
    std::string kind = io::string(io::at(j, "kind", path), io::child(path, "kind"));
    if (kind == "linear-orders") return ClassDescriptor::linear_orders();
    if (kind == "linear-orders-with-predicates") return ClassDescriptor::with_predicates();
    if (kind == "hypergraph") {
        auto n = io::integer(io::at(j, "n", path), io::child(path, "n"));
        auto k = io::integer(io::at(j, "k", path), io::child(path, "k"));
        try {
            return ClassDescriptor::hypergraph(static_cast<int>(n), static_cast<int>(k));
        } catch (const std::invalid_argument& e) {
            throw InputError(path, e.what());
        }
    }
    throw InputError(io::child(path, "kind"), "unknown class kind '" + kind + "'");
}

inline json to_json(const IndexModel& m) {
    json vs = json::array();
    for (const auto& v : m.vertices()) vs.push_back({{"id", v.id}, {"coord", to_string(v.coord)}, {"pred", to_string(v.pred)}});
    json es = json::array();
    for (const auto& e : m.edges()) es.push_back(e);
    return {{"class", to_json(m.cls())}, {"vertices", vs}, {"edges", es}};
}

/** Parses and validates an IndexModel (duplicate ids, coordinates, edge shape, forbidden cliques). */
inline IndexModel model_from_json(const json& j, const std::string& path) {
    IndexModel m(class_from_json(io::at(j, "class", path), io::child(path, "class")));
    const std::string vpath = io::child(path, "vertices");
    std::size_t i = 0;
    for (const auto& v : io::array(io::at(j, "vertices", path), vpath)) {
        const std::string p = io::child(vpath, i++);
        auto id = io::vertex_id(io::at(v, "id", p), io::child(p, "id"));
        Rational coord = io::rational(io::at(v, "coord", p), io::child(p, "coord"));
        Rational pred = v.contains("pred") ? io::rational(v["pred"], io::child(p, "pred")) : Rational(0);
        if (m.contains(id)) throw InputError(io::child(p, "id"), "duplicate vertex id " + std::to_string(id));
        m.add_vertex(id, coord, pred);
    }
    const std::string epath = io::child(path, "edges");
    i = 0;
    if (j.contains("edges"))
        for (const auto& e : io::array(j["edges"], epath)) {
            const std::string p = io::child(epath, i++);
            Tuple ids = io::tuple(e, p);
            for (auto x : ids)
                if (!m.contains(x)) throw InputError(p, "unknown vertex id " + std::to_string(x));
            m.add_edge(ids);
        }
    ValidationReport rep = validate_structure(m);
    if (!rep.ok()) throw InputError(path, rep.violations.front().kind + ": " + rep.violations.front().message);
    return m;
}

inline json to_json(const ValidationReport& r) {
    json vs = json::array();
    for (const auto& v : r.violations) vs.push_back({{"kind", v.kind}, {"vertices", v.vertices}, {"message", v.message}});
    return {{"ok", r.ok()}, {"violations", vs}};
}

/** Inverse of QfType::code(). */
inline QfType qftype_from_code(const std::string& code) {
    std::size_t pos = 0;
    auto need = [&](std::size_t n) {
        if (pos + n > code.size()) throw std::invalid_argument("truncated type code");
    };
    auto byte = [&]() {
        need(1);
        return static_cast<unsigned char>(code[pos++]);
    };
    auto get32 = [&]() {
        std::uint32_t x = 0;
        for (int s = 0; s < 32; s += 8) x |= static_cast<std::uint32_t>(byte()) << s;
        return x;
    };
    if (byte() != 'Q') throw std::invalid_argument("type code does not start with 'Q'");
    QfType r;
    r.length = get32();
    r.param_count = get32();
    r.has_preds = byte() != 0;
    r.edge_arity = byte();
    const std::size_t w = r.width();
    if (w > 4096) throw std::invalid_argument("type code width out of range");
    for (std::size_t i = 0; i < (w ? w * (w - 1) / 2 : 0); ++i) {
        int c = static_cast<int>(byte()) - 1;
        if (c < -1 || c > 1) throw std::invalid_argument("bad order byte in type code");
        r.order.push_back(static_cast<std::int8_t>(c));
    }
    if (r.has_preds)
        for (std::size_t i = 0; i < w; ++i) {
            auto end = code.find(';', pos);
            if (end == std::string::npos) throw std::invalid_argument("truncated predicate label in type code");
            r.preds.push_back(parse_rational(std::string_view(code).substr(pos, end - pos)));
            pos = end + 1;
        }
    std::uint32_t edges = get32();
    for (std::uint32_t e = 0; e < edges; ++e) {
        std::vector<std::uint32_t> pos_list;
        for (std::uint32_t a = 0; a < r.edge_arity; ++a) pos_list.push_back(get32());
        r.edges.push_back(pos_list);
    }
    if (pos != code.size()) throw std::invalid_argument("trailing bytes in type code");
    if (r.code() != code) throw std::invalid_argument("type code is not canonical");
    return r;
}

inline QfType qftype_from_json(const json& j, const std::string& path) {
    try {
        return qftype_from_code(io::hex_code(j, path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path, e.what());
    }
}

// ---- oracle ----

inline json to_json(const TheoryDescriptor& t) {
    json j{{"kind", theory_name(t)}};
    if (t.kind != TheoryKind::random_graph) j["n"] = t.n;
    if (t.kind == TheoryKind::tnk) j["k"] = t.k;
    return j;
}

inline TheoryDescriptor theory_from_json(const json& j, const std::string& path) {
    std::string kind = io::string(io::at(j, "kind", path), io::child(path, "kind"));
    try {
        if (kind == "random-graph") return TheoryDescriptor::random_graph();
        if (kind == "Tn1") return TheoryDescriptor::tn1(static_cast<int>(io::integer(io::at(j, "n", path), io::child(path, "n"))));
        if (kind == "Tnk")
            return TheoryDescriptor::tnk(static_cast<int>(io::integer(io::at(j, "n", path), io::child(path, "n"))),
                                         static_cast<int>(io::integer(io::at(j, "k", path), io::child(path, "k"))));
    } catch (const InputError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
    throw InputError(io::child(path, "kind"), "unknown theory kind '" + kind + "'");
}

inline json to_json(const Term& t) { return term_name(t); }

inline Term term_from_json(const json& j, const std::string& path) {
    std::string s = io::string(j, path);
    if (s.size() < 2 || (s[0] != 'x' && s[0] != 'p')) throw InputError(path, "expected a term like x0 or p3");
    try {
        std::size_t used = 0;
        auto id = std::stoul(s.substr(1), &used);
        if (used != s.size() - 1) throw std::invalid_argument("trailing characters");
        return s[0] == 'x' ? Term::var(static_cast<std::uint32_t>(id)) : Term::param(static_cast<std::uint32_t>(id));
    } catch (const std::exception&) {
        throw InputError(path, "expected a term like x0 or p3");
    }
}

inline json to_json(const std::vector<Term>& ts) {
    json out = json::array();
    for (const auto& t : ts) out.push_back(to_json(t));
    return out;
}

inline json to_json(const Diagram& d) {
    json lits = json::array();
    for (const auto& lit : d.literals) {
        if (const auto* e = std::get_if<EdgeLiteral>(&lit))
            lits.push_back({{"kind", "edge"}, {"positive", e->positive}, {"args", to_json(e->args)}});
        else {
            const auto& n = std::get<NeqLiteral>(lit);
            lits.push_back({{"kind", "neq"}, {"var", to_json(n.var)}, {"other", to_json(n.other)}});
        }
    }
    json edges = json::array();
    for (const auto& e : d.param_edges) edges.push_back(e);
    return {{"theory", to_json(d.theory)}, {"params", d.params}, {"param_edges", edges}, {"free_vars", d.free_vars}, {"literals", lits}};
}

inline Diagram diagram_from_json(const json& j, const std::string& path) {
    Diagram d;
    d.theory = theory_from_json(io::at(j, "theory", path), io::child(path, "theory"));
    d.params = io::tuple(io::at(j, "params", path), io::child(path, "params"));
    d.free_vars = io::tuple(io::at(j, "free_vars", path), io::child(path, "free_vars"));
    if (j.contains("param_edges")) {
        const std::string ep = io::child(path, "param_edges");
        for (auto& e : io::list<Tuple>(j["param_edges"], ep, [](const json& x, const std::string& p) { return io::tuple(x, p); })) {
            std::sort(e.begin(), e.end());
            d.param_edges.insert(e);
        }
    }
    const std::string lp = io::child(path, "literals");
    std::size_t i = 0;
    for (const auto& l : io::array(io::at(j, "literals", path), lp)) {
        const std::string p = io::child(lp, i++);
        std::string kind = io::string(io::at(l, "kind", p), io::child(p, "kind"));
        if (kind == "edge") {
            EdgeLiteral e;
            e.positive = io::boolean(io::at(l, "positive", p), io::child(p, "positive"));
            e.args = io::list<Term>(io::at(l, "args", p), io::child(p, "args"), term_from_json);
            d.literals.emplace_back(e);
        } else if (kind == "neq") {
            d.literals.emplace_back(NeqLiteral{term_from_json(io::at(l, "var", p), io::child(p, "var")),
                                               term_from_json(io::at(l, "other", p), io::child(p, "other"))});
        } else {
            throw InputError(io::child(p, "kind"), "expected \"edge\" or \"neq\"");
        }
    }
    try {
        detail::check_diagram(d);
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
    return d;
}

inline json to_json(const ConsistencyVerdict& v) {
    return {{"consistent", v.consistent}, {"reason", reason_name(v.reason)}, {"witness", to_json(v.witness)}};
}

// ---- shearing ----

inline json to_json(const Formula& f) {
    return {{"positive", f.positive}, {"negative", f.negative}, {"distinct", f.distinct}};
}

inline Formula formula_from_json(const json& j, const std::string& path) {
    auto lists = [&](const char* key) {
        if (!j.contains(key)) return std::vector<std::vector<std::size_t>>{};
        return io::list<std::vector<std::size_t>>(j[key], io::child(path, key), io::indices);
    };
    if (!j.is_object()) throw InputError(path, "expected an object");
    Formula f;
    f.positive = lists("positive");
    f.negative = lists("negative");
    if (j.contains("distinct")) f.distinct = io::indices(j["distinct"], io::child(path, "distinct"));
    return f;
}

inline std::string edge_rule_name(EdgeRule r) { return r == EdgeRule::skeleton ? "skeleton" : "matching-complement"; }

inline json to_json(const Labeling& lab) {
    json j{{"kind", lab.kind == LabelingKind::projection ? "projection" : "collision"}, {"width", lab.width}};
    if (lab.kind == LabelingKind::projection) {
        j["coord_map"] = lab.coord_map;
        j["rows"] = lab.rows;
        j["edge_rule"] = edge_rule_name(lab.edge_rule);
    } else {
        json cs = json::array();
        for (const auto& [ij, codes] : lab.collisions) {
            json hex = json::array();
            for (const auto& c : codes) hex.push_back(QfType::to_hex(c));
            cs.push_back({{"i", ij.first}, {"j", ij.second}, {"codes", hex}});
        }
        j["collisions"] = cs;
    }
    return j;
}

inline Labeling labeling_from_json(const json& j, const std::string& path) {
    std::string kind = io::string(io::at(j, "kind", path), io::child(path, "kind"));
    if (kind == "projection") {
        auto coord_map = io::indices(io::at(j, "coord_map", path), io::child(path, "coord_map"));
        std::vector<std::size_t> rows;
        if (j.contains("rows")) rows = io::indices(j["rows"], io::child(path, "rows"));
        EdgeRule rule = EdgeRule::skeleton;
        if (j.contains("edge_rule")) {
            std::string r = io::string(j["edge_rule"], io::child(path, "edge_rule"));
            if (r == "matching-complement")
                rule = EdgeRule::matching_complement;
            else if (r != "skeleton")
                throw InputError(io::child(path, "edge_rule"), "expected \"skeleton\" or \"matching-complement\"");
        }
        if (!rows.empty() && rows.size() != coord_map.size())
            throw InputError(io::child(path, "rows"), "length differs from coord_map");
        return Labeling::projection(coord_map, rows, rule);
    }
    if (kind == "collision") {
        Labeling lab = Labeling::collision(io::natural(io::at(j, "width", path), io::child(path, "width")));
        const std::string cp = io::child(path, "collisions");
        std::size_t n = 0;
        for (const auto& c : io::array(io::at(j, "collisions", path), cp)) {
            const std::string p = io::child(cp, n++);
            auto i = io::natural(io::at(c, "i", p), io::child(p, "i"));
            auto jj = io::natural(io::at(c, "j", p), io::child(p, "j"));
            if (i >= lab.width || jj >= lab.width) throw InputError(p, "position out of range for the labeling width");
            lab.collisions[{i, jj}];
            const std::string hp = io::child(p, "codes");
            std::size_t h = 0;
            for (const auto& code : io::array(io::at(c, "codes", p), hp)) {
                const std::string q = io::child(hp, h++);
                lab.add(i, jj, io::hex_code(code, q));
            }
        }
        return lab;
    }
    throw InputError(io::child(path, "kind"), "expected \"projection\" or \"collision\"");
}

inline json to_json(const ShearingInstance& inst) {
    return {{"base", to_json(inst.base)},   {"s", inst.s},
            {"t", inst.t},                  {"r", inst.r.hex()},
            {"theory", to_json(inst.theory)}, {"labeling", to_json(inst.labeling)},
            {"formula", to_json(inst.formula)}};
}

/** Parses an instance; r is recomputed from (t, s) in the base and must match when given. */
inline ShearingInstance instance_from_json(const json& j, const std::string& path) {
    IndexModel base = model_from_json(io::at(j, "base", path), io::child(path, "base"));
    Tuple s = io::tuple(io::at(j, "s", path), io::child(path, "s"));
    Tuple t = io::tuple(io::at(j, "t", path), io::child(path, "t"));
    for (auto [name, tup] : {std::pair<const char*, const Tuple*>{"s", &s}, {"t", &t}})
        for (std::size_t i = 0; i < tup->size(); ++i)
            if (!base.contains((*tup)[i]))
                throw InputError(io::child(io::child(path, name), i), "unknown vertex id " + std::to_string((*tup)[i]));
    TheoryDescriptor theory = theory_from_json(io::at(j, "theory", path), io::child(path, "theory"));
    Labeling lab = labeling_from_json(io::at(j, "labeling", path), io::child(path, "labeling"));
    Formula f = formula_from_json(io::at(j, "formula", path), io::child(path, "formula"));
    ShearingInstance inst = make_instance(base, s, t, theory, lab, f);
    if (j.contains("r") && qftype_from_json(j["r"], io::child(path, "r")) != inst.r)
        throw InputError(io::child(path, "r"), "does not match the type of t over s in base");
    try {
        detail::check_instance_shape(inst);
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
    return inst;
}

inline json to_json(const CoherenceReport& r) {
    json tuples = json::array();
    for (const auto& t : r.tuples) tuples.push_back(t);
    return {{"ok", r.ok}, {"violation", r.violation}, {"tuples", tuples}, {"positions", r.positions}};
}

inline json to_json(const ShearingReport& r) {
    json sub = json::array();
    for (const auto& t : r.witness_subfamily) sub.push_back(t);
    return {{"valid", r.valid()},
            {"single_consistent", r.single_consistent},
            {"family_inconsistent", r.family_inconsistent},
            {"single_verdict", to_json(r.single_verdict)},
            {"witness_indices", r.witness_indices},
            {"witness_subfamily", sub},
            {"subfamily_size", r.witness_indices.size()},
            {"witness_verdict", r.witness_verdict ? to_json(*r.witness_verdict) : json(nullptr)},
            {"realization_count", r.realization_count},
            {"extension_budget_used", r.extension_budget_used},
            {"insufficient_realizations", r.insufficient_realizations}};
}

inline json to_json(const ChainReport& r) {
    json steps = json::array();
    for (const auto& s : r.steps) steps.push_back(to_json(s));
    return {{"unsuperstable", r.unsuperstable()},
            {"steps", steps},
            {"model_valid", r.model_valid},
            {"union_consistent", r.union_consistent},
            {"union_verdict", to_json(r.union_verdict)}};
}

// ---- self-collision ----

inline json to_json(const TraceMove& m) {
    json eqs = json::array();
    for (const auto& e : m.equalities) eqs.push_back({{"a1", e.a1}, {"b1", e.b1}, {"a2", e.a2}, {"b2", e.b2}});
    json cols = json::array();
    for (const auto& c : m.collisions) cols.push_back({{"a", c.a}, {"i", c.i}, {"b", c.b}, {"j", c.j}});
    return {{"kind", m.kind}, {"note", m.note}, {"equalities", eqs}, {"collisions", cols}, {"fresh", m.fresh}};
}

inline json to_json(const SelfCollision& d) {
    json trace = json::array();
    for (const auto& m : d.trace) trace.push_back(to_json(m));
    return {{"v", d.v},
            {"w", d.w},
            {"z", d.z},
            {"initial_crossings", d.initial_crossings},
            {"fresh_used", d.fresh_used},
            {"J", to_json(d.J)},
            {"trace", trace}};
}

// ---- circle ----

inline json to_json(const InvariantRelation& r) {
    json codes = json::array();
    for (const auto& c : r.accepted) codes.push_back(QfType::to_hex(c));
    return {{"arity", r.arity}, {"over", r.over}, {"accepted", codes}};
}

inline InvariantRelation relation_from_json(const json& j, const std::string& path) {
    InvariantRelation r;
    r.arity = io::natural(io::at(j, "arity", path), io::child(path, "arity"));
    if (j.contains("over")) r.over = io::tuple(j["over"], io::child(path, "over"));
    const std::string ap = io::child(path, "accepted");
    std::size_t i = 0;
    for (const auto& c : io::array(io::at(j, "accepted", path), ap)) r.accepted.insert(io::hex_code(c, io::child(ap, i++)));
    return r;
}

inline json to_json(const CircleWitness& w) {
    return {{"s", w.s}, {"t", w.t}, {"E1", to_json(w.E1)}, {"E2", to_json(w.E2)}, {"F", to_json(w.F)}};
}

inline CircleWitness circle_witness_from_json(const json& j, const std::string& path) {
    return {io::tuple(io::at(j, "s", path), io::child(path, "s")), io::tuple(io::at(j, "t", path), io::child(path, "t")),
            relation_from_json(io::at(j, "E1", path), io::child(path, "E1")),
            relation_from_json(io::at(j, "E2", path), io::child(path, "E2")),
            relation_from_json(io::at(j, "F", path), io::child(path, "F"))};
}

inline json to_json(const CircleCheck& c) {
    json vs = json::array();
    for (const auto& v : c.violations) {
        json ts = json::array();
        for (const auto& t : v.tuples) ts.push_back(t);
        vs.push_back({{"kind", v.kind}, {"relation", v.relation}, {"tuples", ts}});
    }
    return {{"ok", c.ok()}, {"realizations", c.realizations}, {"violations", vs}};
}

inline json pattern_json(const EqualityPattern& p) {
    json out = json::array();
    for (auto [i, j] : p) out.push_back({i, j});
    return out;
}

inline json to_json(const CircleSearchResult& r) {
    json j{{"found", r.witness.has_value()},
           {"bounds", {{"L", r.bounds.L}, {"S", r.bounds.S}, {"N", r.bounds.N}}},
           {"contexts", r.contexts},
           {"candidates", r.candidates}};
    if (r.witness) {
        j["E1"] = pattern_name(r.e1);
        j["E2"] = pattern_name(r.e2);
        j["F"] = pattern_name(r.f);
        j["witness"] = to_json(*r.witness);
        j["J"] = to_json(*r.J);
    } else {
        j["result"] = "none-up-to-bounds";
    }
    return j;
}

inline json to_json(const StrongPairwise& sp) {
    json un = json::array();
    for (const auto& t : sp.unmatched) un.push_back(t);
    return {{"ok", sp.ok}, {"partners_added", sp.partners_added}, {"unmatched", un}};
}

// ---- eq-extension ----

inline json to_json(const EqExtension& ext) {
    json rels = json::array();
    for (const auto& r : ext.relations) rels.push_back(to_json(r));
    json lifted = json::array();
    for (const auto& l : ext.lifted) {
        json codes = json::array();
        for (const auto& c : l.accepted) codes.push_back(QfType::to_hex(c));
        lifted.push_back({{"name", l.name}, {"sorts", l.sorts}, {"accepted", codes}});
    }
    json classes = json::array();
    for (const auto& c : ext.classes) {
        json det = json::array();
        for (const auto& d : c.determined) det.push_back(d ? json(*d) : json(nullptr));
        classes.push_back({{"id", c.id},
                           {"relation", c.relation},
                           {"representative", c.representative},
                           {"size", c.members.size()},
                           {"determined", det}});
    }
    return {{"base", to_json(ext.base)},
            {"relations", rels},
            {"lifted", lifted},
            {"p_star", std::vector<VertexId>(ext.p_star.begin(), ext.p_star.end())},
            {"classes", classes}};
}

inline json to_json(const ClosureReport& r) {
    return {{"kind", closure_kind_name(r.kind)},
            {"element", r.element},
            {"status", closure_status_name(r.status)},
            {"bound_used", r.bound_used},
            {"witnesses", r.witnesses}};
}

inline json to_json(const IndistinguishableResult& r) {
    json j{{"candidates", r.candidates}, {"bound", r.bound}};
    if (r.pair)
        j["pair"] = {r.pair->first, r.pair->second};
    else
        j["pair"] = "none-up-to-bounds";
    return j;
}

/** Top-level report envelope. */
inline json report(const std::string& command, json body) {
    json out{{"schema", kSchema}, {"command", command}};
    for (auto& [k, v] : body.items()) out[k] = std::move(v);
    return out;
}

} // namespace shearlab
