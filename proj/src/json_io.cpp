#include "culift/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace culift::io {

namespace {

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw validation_error("missing field '" + std::string(key) + "' in " + where);
    return *it;
}

int need_int(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_number_integer())
        throw validation_error("field '" + std::string(key) + "' in " + where +
                               " must be an integer");
    return v.get<int>();
}

} // namespace

json rat_json(const Rat& r) { return r.str(); }

Rat rat_from(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    throw validation_error("expected a rational (integer or \"p/q\") in " + where);
}

json extnat_json(const ExtNat& v) {
    if (v.is_inf()) return "inf";
    return v.value();
}

ExtNat extnat_from(const json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return ExtNat::inf();
        throw validation_error("expected a natural number or \"inf\" in " + where);
    }
    if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0))
        return ExtNat(j.get<unsigned long long>());
    throw validation_error("expected a natural number or \"inf\" in " + where);
}

// ---------------------------------------------------------------------------

json to_json(const StepLsc& f) {
    json arcs = json::array(), pts = json::array();
    for (int i = 0; i < f.cells(); ++i) {
        arcs.push_back(extnat_json(f.arc(i)));
        pts.push_back(extnat_json(f.pt(i)));
    }
    return {{"schema", "step-lsc"},
            {"resolution", f.resolution()},
            {"arc_values", arcs},
            {"point_values", pts}};
}

StepLsc step_from_json(const json& j) {
    int n = need_int(j, "resolution", "step-lsc");
    const json& arcs = need(j, "arc_values", "step-lsc");
    const json& pts = need(j, "point_values", "step-lsc");
    std::vector<ExtNat> a, p;
    for (const auto& v : arcs) a.push_back(extnat_from(v, "step-lsc arc_values"));
    for (const auto& v : pts) p.push_back(extnat_from(v, "step-lsc point_values"));
    return StepLsc(n, std::move(a), std::move(p));
}

json to_json(const MetricGraph& g) {
    json verts = json::array(), edges = json::array();
    for (int v = 0; v < g.num_vertices; ++v) verts.push_back(v);
    for (const auto& e : g.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"length", rat_json(e.length)}});
    return {{"schema", "metric-graph"}, {"vertices", verts}, {"edges", edges}};
}

GraphPtr graph_from_json(const json& j) {
    auto g = std::make_shared<MetricGraph>();
    const json& verts = need(j, "vertices", "metric-graph");
    g->num_vertices = int(verts.size());
    for (const auto& e : need(j, "edges", "metric-graph")) {
        MetricGraph::Edge ed;
        ed.a = need_int(e, "a", "metric-graph edge");
        ed.b = need_int(e, "b", "metric-graph edge");
        ed.length = rat_from(need(e, "length", "metric-graph edge"), "edge length");
        g->edges.push_back(ed);
    }
    g->validate();
    return g;
}

json to_json(const GraphLsc& f) {
    json edges = json::array();
    for (const auto& ef : f.edges) {
        json cuts = json::array(), iv = json::array(), bv = json::array();
        for (const auto& c : ef.cuts) cuts.push_back(rat_json(c));
        for (const auto& v : ef.iv) iv.push_back(extnat_json(v));
        for (const auto& v : ef.bv) bv.push_back(extnat_json(v));
        edges.push_back({{"cuts", cuts}, {"interval_values", iv}, {"breakpoint_values", bv}});
    }
    json vv = json::array();
    for (const auto& v : f.vertex_values) vv.push_back(extnat_json(v));
    return {{"schema", "graph-lsc"}, {"edges", edges}, {"vertex_values", vv}};
}

GraphLsc graphlsc_from_json(const json& j, GraphPtr g) {
    GraphLsc f(g);
    const json& edges = need(j, "edges", "graph-lsc");
    if (edges.size() != g->edges.size())
        throw validation_error("graph-lsc: edge count differs from the graph");
    for (size_t e = 0; e < edges.size(); ++e) {
        auto& ef = f.edges[e];
        ef.cuts.clear();
        ef.iv.clear();
        ef.bv.clear();
        for (const auto& c : need(edges[e], "cuts", "graph-lsc edge"))
            ef.cuts.push_back(rat_from(c, "graph-lsc cut"));
        for (const auto& v : need(edges[e], "interval_values", "graph-lsc edge"))
            ef.iv.push_back(extnat_from(v, "graph-lsc interval value"));
        for (const auto& v : need(edges[e], "breakpoint_values", "graph-lsc edge"))
            ef.bv.push_back(extnat_from(v, "graph-lsc breakpoint value"));
    }
    f.vertex_values.clear();
    for (const auto& v : need(j, "vertex_values", "graph-lsc"))
        f.vertex_values.push_back(extnat_from(v, "graph-lsc vertex value"));
    if (f.vertex_values.size() != size_t(g->num_vertices))
        throw validation_error("graph-lsc: vertex value count differs from the graph");
    f.validate();
    return f;
}

json to_json(const DiagonalUnitary& u) {
    json blocks = json::array();
    for (const auto& b : u.blocks) {
        json entries = json::array();
        size_t i = 0;
        std::vector<Angle> sorted = b;
        std::sort(sorted.begin(), sorted.end());
        while (i < sorted.size()) {
            size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            entries.push_back({{"angle", sorted[i].str()}, {"multiplicity", j - i}});
            i = j;
        }
        blocks.push_back(entries);
    }
    return {{"schema", "diagonal-unitary"}, {"blocks", blocks}};
}

DiagonalUnitary unitary_from_json(const json& j) {
    DiagonalUnitary u;
    for (const auto& b : need(j, "blocks", "diagonal-unitary")) {
        std::vector<Angle> block;
        for (const auto& e : b) {
            Angle a(rat_from(need(e, "angle", "diagonal entry"), "angle"));
            long long mult = need(e, "multiplicity", "diagonal entry").get<long long>();
            if (mult < 0) throw validation_error("negative multiplicity in diagonal-unitary");
            for (long long i = 0; i < mult; ++i) block.push_back(a);
        }
        u.blocks.push_back(std::move(block));
    }
    if (u.blocks.empty()) throw validation_error("diagonal-unitary: no blocks");
    return u;
}

json to_json(const UnitaryField& u) {
    json tracks = json::array();
    for (int t = 0; t < u.d; ++t) {
        json per_edge = json::array();
        for (size_t e = 0; e < u.tracks[t].size(); ++e) {
            const auto& te = u.tracks[t][e];
            json segs = json::array();
            for (size_t i = 0; i + 1 < te.cuts.size(); ++i)
                segs.push_back({{"from_coord", rat_json(te.cuts[i])},
                                {"to_coord", rat_json(te.cuts[i + 1])},
                                {"start_angle", rat_json(te.lifts[i])},
                                {"end_angle", rat_json(te.lifts[i + 1])}});
            per_edge.push_back(segs);
        }
        tracks.push_back(per_edge);
    }
    json va = json::array();
    for (int t = 0; t < u.d; ++t) {
        json row = json::array();
        for (const auto& a : u.vertex_angles[t]) row.push_back(a.str());
        va.push_back(row);
    }
    return {{"schema", "unitary-field"},
            {"graph", to_json(*u.graph)},
            {"d", u.d},
            {"tracks", tracks},
            {"vertex_angles", va}};
}

UnitaryField field_from_json(const json& j) {
    UnitaryField u;
    u.graph = graph_from_json(need(j, "graph", "unitary-field"));
    u.d = need_int(j, "d", "unitary-field");
    const json& tracks = need(j, "tracks", "unitary-field");
    if (int(tracks.size()) != u.d)
        throw validation_error("unitary-field: track count differs from d");
    for (const auto& per_edge : tracks) {
        std::vector<UnitaryField::TrackEdge> tes;
        if (per_edge.size() != u.graph->edges.size())
            throw validation_error("unitary-field: per-edge segment lists differ from the graph");
        for (size_t e = 0; e < per_edge.size(); ++e) {
            UnitaryField::TrackEdge te;
            const json& segs = per_edge[e];
            if (segs.empty())
                throw validation_error("unitary-field: empty segment list on an edge");
            for (size_t i = 0; i < segs.size(); ++i) {
                Rat from = rat_from(need(segs[i], "from_coord", "segment"), "from_coord");
                Rat to = rat_from(need(segs[i], "to_coord", "segment"), "to_coord");
                Rat sa = rat_from(need(segs[i], "start_angle", "segment"), "start_angle");
                Rat ea = rat_from(need(segs[i], "end_angle", "segment"), "end_angle");
                if (i == 0) {
                    te.cuts.push_back(from);
                    te.lifts.push_back(sa);
                } else if (te.cuts.back() != from || te.lifts.back() != sa) {
                    throw validation_error("unitary-field: segments do not chain on edge " +
                                           std::to_string(e));
                }
                te.cuts.push_back(to);
                te.lifts.push_back(ea);
            }
            tes.push_back(std::move(te));
        }
        u.tracks.push_back(std::move(tes));
    }
    const json& va = need(j, "vertex_angles", "unitary-field");
    for (const auto& row : va) {
        std::vector<Angle> angles;
        for (const auto& a : row) angles.push_back(Angle(rat_from(a, "vertex angle")));
        u.vertex_angles.push_back(std::move(angles));
    }
    u.validate();
    return u;
}

// ---------------------------------------------------------------------------
// valuations

json to_json(const FinDimValuation& a) {
    json dims = json::array();
    for (int d : a.dims()) dims.push_back(d);
    json unitv = json::array();
    for (const auto& x : a.unit()) unitv.push_back(extnat_json(x));
    json arcs = json::array();
    int c = 1 << a.resolution();
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s) {
            json v = json::array();
            for (const auto& x : a.value(s, len)) v.push_back(extnat_json(x));
            arcs.push_back({{"start", s}, {"length", len}, {"value", v}});
        }
    return {{"schema", "arc-valuation"},
            {"resolution", a.resolution()},
            {"codomain", {{"kind", "findim"}, {"dims", dims}}},
            {"unit", unitv},
            {"arcs", arcs}};
}

json to_json(const GraphValuation& a) {
    json arcs = json::array();
    int c = 1 << a.resolution();
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s)
            arcs.push_back({{"start", s}, {"length", len}, {"value", to_json(a.value(s, len))}});
    return {{"schema", "arc-valuation"},
            {"resolution", a.resolution()},
            {"codomain",
             {{"kind", "graph"}, {"d", a.dim()}, {"graph", to_json(*a.graph())}}},
            {"unit", to_json(a.unit())},
            {"arcs", arcs}};
}

namespace {

json cuz_json(const CuZElement& v) {
    if (v.is_compact()) return {{"kind", "compact"}, {"value", rat_json(v.value())}};
    if (v.is_inf()) return {{"kind", "soft"}, {"value", "inf"}};
    return {{"kind", "soft"}, {"value", rat_json(v.value())}};
}

CuZElement cuz_from(const json& j, const std::string& where) {
    std::string kind = need(j, "kind", where).get<std::string>();
    const json& val = need(j, "value", where);
    if (kind == "compact") {
        Rat r = rat_from(val, where);
        if (!r.is_integer() || r.is_negative())
            throw validation_error("compact CuZ value must be a natural number in " + where);
        return CuZElement::compact((unsigned long long)r.num());
    }
    if (kind == "soft") {
        if (val.is_string() && val.get<std::string>() == "inf") return CuZElement::soft_inf();
        return CuZElement::soft(rat_from(val, where));
    }
    throw validation_error("CuZ kind must be 'compact' or 'soft' in " + where);
}

} // namespace

json to_json(const CuZValuation& a) {
    json arcs = json::array();
    int c = 1 << a.resolution();
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s)
            arcs.push_back({{"start", s}, {"length", len}, {"value", cuz_json(a.value(s, len))}});
    return {{"schema", "arc-valuation"},
            {"resolution", a.resolution()},
            {"codomain", {{"kind", "jiangsu"}}},
            {"unit", cuz_json(a.unit())},
            {"arcs", arcs}};
}

json to_json(const AnyValuation& a) {
    return std::visit([](const auto& x) { return to_json(x); }, a.v);
}

AnyValuation valuation_from_json(const json& j) {
    int n = need_int(j, "resolution", "arc-valuation");
    const json& cod = need(j, "codomain", "arc-valuation");
    std::string kind = need(cod, "kind", "codomain").get<std::string>();
    int c = 1 << n;
    auto each_arc = [&](const std::function<void(int, int, const json&)>& fn) {
        for (const auto& arc : need(j, "arcs", "arc-valuation")) {
            int s = need_int(arc, "start", "arc entry");
            int len = need_int(arc, "length", "arc entry");
            if (s < 0 || s >= c || len < 1 || len > c)
                throw validation_error("arc entry (start " + std::to_string(s) + ", len " +
                                       std::to_string(len) + ") out of range");
            fn(s, len, need(arc, "value", "arc entry"));
        }
    };
    if (kind == "findim") {
        std::vector<int> dims;
        for (const auto& d : need(cod, "dims", "codomain")) dims.push_back(d.get<int>());
        FinDimValuation a(n, dims);
        each_arc([&](int s, int len, const json& v) {
            FinDimValue val;
            for (const auto& x : v) val.push_back(extnat_from(x, "arc value"));
            a.set_value(s, len, std::move(val));
        });
        const json& unitv = need(j, "unit", "arc-valuation");
        FinDimValue u;
        for (const auto& x : unitv) u.push_back(extnat_from(x, "unit"));
        if (u != a.unit())
            throw validation_error("unital consistency fails: stored unit differs from the "
                                   "codomain block dimensions");
        return AnyValuation{std::move(a)};
    }
    if (kind == "graph") {
        GraphPtr g = graph_from_json(need(cod, "graph", "codomain"));
        int d = need_int(cod, "d", "codomain");
        GraphValuation a(g, n, d);
        each_arc([&](int s, int len, const json& v) {
            a.set_value(s, len, graphlsc_from_json(v, g));
        });
        return AnyValuation{std::move(a)};
    }
    if (kind == "jiangsu") {
        CuZValuation a(n);
        a.set_unit(cuz_from(need(j, "unit", "arc-valuation"), "unit"));
        each_arc([&](int s, int len, const json& v) { a.set_value(s, len, cuz_from(v, "arc value")); });
        return AnyValuation{std::move(a)};
    }
    throw validation_error("unknown codomain kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

json to_json(const WindingClass& w) {
    json edges = json::array();
    for (const auto& ef : w.base.edges) {
        json cuts = json::array(), vals = json::array();
        for (const auto& c : ef.cuts) cuts.push_back(rat_json(c));
        for (const auto& v : ef.vals) vals.push_back(rat_json(v));
        edges.push_back({{"cuts", cuts}, {"values", vals}});
    }
    json vv = json::array();
    for (const auto& v : w.base.vertex_vals) vv.push_back(rat_json(v));
    return {{"schema", "winding-class"},
            {"modulus", w.modulus},
            {"base", {{"edges", edges}, {"vertex_values", vv}}}};
}

json to_json(const ObstructionCertificate& cert) {
    json j = {{"schema", "aue-certificate"}};
    switch (cert.kind) {
        case ObstructionCertificate::Kind::inconclusive:
            j["kind"] = "inconclusive";
            break;
        case ObstructionCertificate::Kind::nonconstant_difference:
            j["kind"] = "nonconstant-difference";
            j["witness_1"] = {{"point", cert.x1.str()}, {"value", rat_json(cert.v1)}};
            j["witness_2"] = {{"point", cert.x2.str()}, {"value", rat_json(cert.v2)}};
            break;
        case ObstructionCertificate::Kind::nonlattice_constant:
            j["kind"] = "nonlattice-constant";
            j["constant"] = rat_json(cert.constant);
            break;
    }
    j["certificate"] = cert.is_certificate();
    return j;
}

json to_json(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"claimed_bound", c.claimed},
                          {"computed_value", c.computed},
                          {"pass", c.pass}});
    return {{"schema", "report"}, {"title", r.title}, {"checks", checks}, {"all_pass", r.all_pass()}};
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw validation_error("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

} // namespace culift::io
