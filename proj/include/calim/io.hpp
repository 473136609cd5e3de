#pragma once

// External interfaces: the JSON-shaped system spec file, JSON report
// serialization for the CLI and the test harness, and text rendering.
// Spec parsing rejects invalid presentations with positional error
// messages ("steps[2].blocks[1]: ...").

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "calim/envelope.hpp"
#include "calim/gallery.hpp"
#include "calim/system.hpp"

namespace calim {

using json = nlohmann::json;

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw std::invalid_argument(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(path + ": missing field '" + key + "'");
    return *it;
}

inline int require_int(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer())
        throw std::invalid_argument(path + "." + key + ": expected an integer");
    return v.get<int>();
}

}  // namespace detail

inline SystemSpec parse_spec(const json& j) {
    SystemSpec spec;
    spec.n1 = detail::require_int(j, "n1", "spec");
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (j.contains("envelope_label"))
        spec.envelope_label = j.at("envelope_label").get<std::string>();

    int chain_dim = spec.n1;
    if (j.contains("steps")) {
        const json& steps = j.at("steps");
        if (!steps.is_array()) throw std::invalid_argument("spec.steps: expected an array");
        for (std::size_t s = 0; s < steps.size(); ++s) {
            const std::string path = "steps[" + std::to_string(s) + "]";
            const json& jstep = steps[s];
            const json& jblocks = detail::require(jstep, "blocks", path);
            if (!jblocks.is_array() || jblocks.empty())
                throw std::invalid_argument(path + ".blocks: expected a nonempty array");
            CompressionEmbedding emb;
            emb.source_dim = chain_dim;
            for (std::size_t b = 0; b < jblocks.size(); ++b) {
                const std::string bpath = path + ".blocks[" + std::to_string(b) + "]";
                const json& jb = jblocks[b];
                if (!jb.is_array() || jb.size() != 2 || !jb[0].is_number_integer() ||
                    !jb[1].is_number_integer())
                    throw std::invalid_argument(bpath + ": expected an [start, end) pair");
                Interval q{chain_dim, jb[0].get<int>(), jb[1].get<int>()};
                if (!(0 <= q.start && q.start <= q.end && q.end <= chain_dim))
                    throw std::invalid_argument(bpath + ": interval out of range for ambient " +
                                                std::to_string(chain_dim));
                if (q.rank() < 1) throw std::invalid_argument(bpath + ": rank-0 interval");
                emb.blocks.push_back(q);
            }
            const int dist = detail::require_int(jstep, "distinguished", path);
            if (dist < 0 || static_cast<std::size_t>(dist) >= emb.blocks.size())
                throw std::invalid_argument(path + ".distinguished: index out of range");
            emb.distinguished = static_cast<std::size_t>(dist);
            try {
                chain_dim = validate_embedding(emb);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(path + ": " + e.what());
            }
            spec.prefix.push_back(std::move(emb));
        }
    }

    if (j.contains("tail")) {
        const json& jt = j.at("tail");
        const std::string kind = detail::require(jt, "kind", "tail").get<std::string>();
        if (kind == "stationary") {
            StationaryTail tail;
            const json& jsum = detail::require(jt, "summands", "tail");
            if (!jsum.is_array() || jsum.empty())
                throw std::invalid_argument("tail.summands: expected a nonempty array");
            for (std::size_t i = 0; i < jsum.size(); ++i) {
                const std::string a = jsum[i].get<std::string>();
                if (a == "id")
                    tail.atoms.push_back(StationaryAtom::Identity);
                else if (a == "lh")
                    tail.atoms.push_back(StationaryAtom::LastHalf);
                else if (a == "diag")
                    tail.atoms.push_back(StationaryAtom::Diagonal);
                else if (a == "dlh")
                    tail.atoms.push_back(StationaryAtom::DiagonalLastHalf);
                else
                    throw std::invalid_argument("tail.summands[" + std::to_string(i) +
                                                "]: unknown summand '" + a +
                                                "' (expected id|lh|diag|dlh)");
            }
            const int dist = detail::require_int(jt, "distinguished", "tail");
            if (dist < 0 || static_cast<std::size_t>(dist) >= tail.atoms.size())
                throw std::invalid_argument("tail.distinguished: index out of range");
            tail.distinguished = static_cast<std::size_t>(dist);
            spec.stationary = std::move(tail);
        } else if (kind == "parametric") {
            ParametricTail tail;
            const std::string id_pos = detail::require(jt, "identity", "tail").get<std::string>();
            if (id_pos == "first")
                tail.identity_first = true;
            else if (id_pos == "last")
                tail.identity_first = false;
            else
                throw std::invalid_argument("tail.identity: expected \"first\" or \"last\"");
            const json& je = detail::require(jt, "entry", "tail");
            const std::string base = detail::require(je, "base", "tail.entry").get<std::string>();
            if (base == "start")
                tail.entry.base = EntryRef::Base::FromStart;
            else if (base == "end")
                tail.entry.base = EntryRef::Base::FromEnd;
            else
                throw std::invalid_argument("tail.entry.base: expected \"start\" or \"end\"");
            tail.entry.offset = detail::require_int(je, "offset", "tail.entry");
            if (jt.contains("growth")) {
                for (const json& g : jt.at("growth")) {
                    if (!g.is_number_integer() || g.get<int>() < 1)
                        throw std::invalid_argument("tail.growth: entries must be positive integers");
                    tail.growth.push_back(g.get<int>());
                }
            }
            spec.parametric = std::move(tail);
        } else {
            throw std::invalid_argument("tail.kind: expected \"stationary\" or \"parametric\"");
        }
    }

    validate_spec(spec);
    return spec;
}

inline SystemSpec parse_spec_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("spec file: ") + e.what());
    }
    return parse_spec(j);
}

inline json spec_to_json(const SystemSpec& spec) {
    json j;
    j["n1"] = spec.n1;
    if (!spec.name.empty()) j["name"] = spec.name;
    if (!spec.envelope_label.empty()) j["envelope_label"] = spec.envelope_label;
    json steps = json::array();
    for (const CompressionEmbedding& emb : spec.prefix) {
        json jb = json::array();
        for (const Interval& b : emb.blocks) jb.push_back({b.start, b.end});
        steps.push_back({{"blocks", jb}, {"distinguished", emb.distinguished}});
    }
    if (!steps.empty()) j["steps"] = steps;
    if (spec.stationary) {
        json summands = json::array();
        for (StationaryAtom a : spec.stationary->atoms) {
            switch (a) {
                case StationaryAtom::Identity: summands.push_back("id"); break;
                case StationaryAtom::LastHalf: summands.push_back("lh"); break;
                case StationaryAtom::Diagonal: summands.push_back("diag"); break;
                case StationaryAtom::DiagonalLastHalf: summands.push_back("dlh"); break;
            }
        }
        j["tail"] = {{"kind", "stationary"},
                     {"summands", summands},
                     {"distinguished", spec.stationary->distinguished}};
    }
    if (spec.parametric) {
        json jt = {{"kind", "parametric"},
                   {"identity", spec.parametric->identity_first ? "first" : "last"},
                   {"entry",
                    {{"base", spec.parametric->entry.base == EntryRef::Base::FromStart ? "start"
                                                                                       : "end"},
                     {"offset", spec.parametric->entry.offset}}}};
        if (!spec.parametric->growth.empty()) jt["growth"] = spec.parametric->growth;
        j["tail"] = jt;
    }
    return j;
}

// --- report serialization ---------------------------------------------

inline json to_json(const Interval& q) { return json{q.start, q.end}; }

inline json to_json(const CompressionEmbedding& emb) {
    json blocks = json::array();
    for (const Interval& b : emb.blocks) blocks.push_back(to_json(b));
    return json{{"source_dim", emb.source_dim},
                {"target_dim", emb.target_dim()},
                {"blocks", blocks},
                {"distinguished", emb.distinguished}};
}

inline json to_json(const AnchoredDecomposition& d) {
    json blocks = json::array();
    for (const AnchoredBlock& b : d.blocks)
        blocks.push_back({{"interval", to_json(b.interval)}, {"basis_offset", b.basis_offset}});
    return json{{"level", d.level},
                {"depth", d.depth},
                {"anchor", d.anchor},
                {"window", {d.window_lo, d.window_hi}},
                {"distinguished", d.distinguished},
                {"blocks", blocks}};
}

inline json to_json(const IndexSetClass& c) {
    return json{{"kind", to_string(c.kind)}, {"probe_depth", c.probe_depth}};
}

inline json to_json(const CompactClassification& c) {
    json j{{"kind", to_string(c.kind)},
           {"probe_depth", c.probe_depth},
           {"certificate", c.certificate}};
    if (c.kind == CompactKind::ContainsFiniteRank) j["finite_rank"] = c.finite_rank;
    return j;
}

inline json to_json(const LevelStructure& ls) {
    json summands = json::array();
    for (const LevelSummand& s : ls.summands)
        summands.push_back({{"interval", to_json(s.interval)}, {"rank", s.rank}});
    return json{{"level", ls.level},
                {"probe_depth", ls.probe_depth},
                {"summands", summands},
                {"identity_index", ls.identity_index},
                {"saturated", ls.saturated},
                {"saturation_note", ls.saturation_note}};
}

inline json to_json(const BratteliDiagram& d) {
    json levels = json::array();
    for (const LevelStructure& ls : d.levels) levels.push_back(to_json(ls));
    json edges = json::array();
    for (std::size_t t = 0; t < d.edges.size(); ++t)
        for (const BratteliEdge& e : d.edges[t])
            edges.push_back({{"from_level", d.levels[t].level},
                             {"from", e.from},
                             {"to", e.to},
                             {"multiplicity", e.multiplicity}});
    return json{{"levels", levels}, {"edges", edges}};
}

inline json to_json(const ReachReport& r) {
    json per_level = json::array();
    for (const auto& lvl : r.earliest) {
        json nodes = json::array();
        for (const auto& e : lvl)
            nodes.push_back(e ? json(*e) : json("not within horizon"));
        per_level.push_back(nodes);
    }
    return json{{"earliest_identity_level", per_level}, {"all_reach", r.all_reach}};
}

inline json to_json(const EnvelopeReport& r) {
    json witnesses = json::array();
    for (const WitnessCheck& w : r.witnesses)
        witnesses.push_back(
            {{"level", w.level}, {"dimension", w.dimension}, {"annihilated", w.annihilated}});
    json j{{"levels", r.levels},
           {"depth", r.depth},
           {"bratteli", to_json(r.diagram)},
           {"reach", to_json(r.reach)},
           {"boundary_witness", witnesses},
           {"compacts", to_json(r.compacts)},
           {"boundary_evidence_complete", r.boundary_evidence_complete},
           {"verdict", r.verdict}};
    if (!r.system_name.empty()) j["system"] = r.system_name;
    if (!r.envelope_label.empty()) j["envelope_label"] = r.envelope_label;
    return j;
}

inline json to_json(const ImageVerdict& v) {
    json j{{"passed", v.passed}, {"family", v.family}, {"details", v.details}};
    if (!v.counterexample.empty()) j["counterexample"] = v.counterexample;
    return j;
}

}  // namespace calim
