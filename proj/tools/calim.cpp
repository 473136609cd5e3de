// Command-line workbench for compression systems of upper-triangular
// matrix algebras: validate presentations, compose embeddings, inspect
// anchored representation windows, build Bratteli diagrams, assemble
// envelope evidence, classify compact content, and run the verification
// battery.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "calim/envelope.hpp"
#include "calim/gallery.hpp"
#include "calim/io.hpp"
#include "calim/suite.hpp"
#include "calim/system.hpp"

namespace {

using namespace calim;

struct Source {
    std::string spec_path;   // JSON system spec file
    std::string example_tag; // or a gallery tag like "A(2,1)"
};

SystemSpec load_source(const Source& src) {
    if (!src.example_tag.empty()) return build_example(ExampleId::parse(src.example_tag));
    std::ifstream in(src.spec_path);
    if (!in) throw std::runtime_error("cannot open spec file '" + src.spec_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_text(buffer.str());
}

struct Options {
    std::string format = "text";
    int from_level = 1;
    int to_level = 2;
    int level = 1;
    int depth = 0;
    int levels = 3;
    std::vector<long long> window;
    std::string dot_path;
    std::string out_path;
    std::vector<std::string> scopes;
    int trials = 0;
};

void emit(const json& j, const std::string& format, const std::string& text) {
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int run_validate(const Source& src, const Options& opt) {
    const SystemSpec spec = load_source(src);
    DirectSystem sys(spec);
    const int probe = opt.depth > 0 ? opt.depth : 6;
    std::vector<int> dims;
    for (int k = 1; k <= probe; ++k) {
        if (static_cast<std::size_t>(k) > spec.prefix.size() + 1 && !spec.has_tail()) break;
        try {
            dims.push_back(sys.dim(k));
        } catch (const std::out_of_range&) {
            break;
        }
    }
    json j{{"valid", true}, {"dimensions", dims}, {"spec", spec_to_json(spec)}};
    std::ostringstream text;
    text << "spec is valid";
    if (!spec.name.empty()) text << " (" << spec.name << ")";
    text << "\nlevel dimensions:";
    for (int d : dims) text << " " << d;
    text << (spec.has_tail() ? " ..." : "") << "\n";
    emit(j, opt.format, text.str());
    return 0;
}

int run_compose(const Source& src, const Options& opt) {
    DirectSystem sys(load_source(src));
    const CompressionEmbedding emb = sys.compose_range(opt.from_level, opt.to_level);
    std::ostringstream text;
    text << "phi_{" << opt.from_level << "," << opt.to_level << "}: T_" << emb.source_dim
         << " -> T_" << emb.target_dim() << "\nblocks:";
    for (std::size_t i = 0; i < emb.blocks.size(); ++i) {
        text << " " << to_string(emb.blocks[i]);
        if (i == emb.distinguished) text << "*";
    }
    text << "\n(* marks the distinguished identity summand)\n";
    emit(to_json(emb), opt.format, text.str());
    return 0;
}

int run_repr(const Source& src, const Options& opt) {
    DirectSystem sys(load_source(src));
    const int depth = opt.depth > 0 ? opt.depth : opt.level + 3;
    const AnchoredDecomposition d = sys.representation_window(opt.level, depth);
    const IndexSetClass cls = sys.classify_index_set(depth);
    json j = to_json(d);
    j["index_set"] = to_json(cls);
    std::ostringstream text;
    text << "rho_" << opt.level << " probed to depth " << depth << ", window [" << d.window_lo
         << ", " << d.window_hi << "), anchor " << d.anchor << "\nindex set: "
         << to_string(cls.kind) << "\nblocks (interval @ basis offset):";
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        text << " " << to_string(d.blocks[i].interval) << "@" << d.blocks[i].basis_offset;
        if (i == d.distinguished) text << "*";
    }
    text << "\n";
    if (opt.window.size() == 2) {
        const long long lo = opt.window[0], hi = opt.window[1];
        text << "restriction to [" << lo << ", " << hi << "]:";
        json restricted = json::array();
        for (const AnchoredBlock& b : d.blocks) {
            const long long b_lo = b.basis_offset;
            const long long b_hi = b.basis_offset + b.interval.rank() - 1;
            if (b_hi < lo || b_lo > hi) continue;
            text << " " << to_string(b.interval) << "@" << b.basis_offset;
            restricted.push_back(
                {{"interval", to_json(b.interval)}, {"basis_offset", b.basis_offset}});
        }
        j["restriction"] = restricted;
        text << "\n";
    }
    emit(j, opt.format, text.str());
    return 0;
}

int run_bratteli(const Source& src, const Options& opt) {
    DirectSystem sys(load_source(src));
    const int depth = opt.depth > 0 ? opt.depth : opt.levels + 1;
    const BratteliDiagram d = bratteli(sys, opt.levels, depth);
    if (!opt.dot_path.empty()) {
        std::ofstream out(opt.dot_path);
        if (!out) throw std::runtime_error("cannot write '" + opt.dot_path + "'");
        out << to_dot(d);
    }
    std::ostringstream text;
    for (const LevelStructure& ls : d.levels) {
        text << "level " << ls.level << " (probe " << ls.probe_depth << "):";
        for (std::size_t i = 0; i < ls.summands.size(); ++i) {
            text << " M_" << ls.summands[i].rank << "@" << to_string(ls.summands[i].interval);
            if (i == ls.identity_index) text << "*";
        }
        text << (ls.saturated ? "  [saturated]" : "  [growing]") << "\n";
    }
    for (std::size_t t = 0; t < d.edges.size(); ++t)
        for (const BratteliEdge& e : d.edges[t])
            text << "  " << d.levels[t].level << ":" << to_string(d.levels[t].summands[e.from].interval)
                 << " -> " << d.levels[t + 1].level << ":"
                 << to_string(d.levels[t + 1].summands[e.to].interval) << "  x" << e.multiplicity
                 << "\n";
    if (!opt.dot_path.empty()) text << "DOT written to " << opt.dot_path << "\n";
    emit(to_json(d), opt.format, text.str());
    return 0;
}

int run_envelope(const Source& src, const Options& opt) {
    DirectSystem sys(load_source(src));
    const int depth = opt.depth > 0 ? opt.depth : opt.levels + 1;
    const EnvelopeReport r = envelope_report(sys, opt.levels, depth);
    std::ostringstream text;
    if (!r.system_name.empty()) text << "system: " << r.system_name << "\n";
    if (!r.envelope_label.empty()) text << "documented envelope: " << r.envelope_label << "\n";
    text << "verdict: " << r.verdict << "\n"
         << "compacts: " << to_string(r.compacts.kind);
    if (r.compacts.kind == CompactKind::ContainsFiniteRank)
        text << " (y = " << r.compacts.finite_rank << ")";
    text << "\n  " << r.compacts.certificate << "\n";
    for (const WitnessCheck& w : r.witnesses)
        text << "witness at level " << w.level << " (T_" << w.dimension << "): "
             << (w.annihilated ? "annihilated" : "RETAINED") << "\n";
    emit(to_json(r), opt.format, text.str());
    return r.boundary_evidence_complete ? 0 : 1;
}

int run_compacts(const Source& src, const Options& opt) {
    DirectSystem sys(load_source(src));
    const CompactClassification c = sys.compact_classification(opt.depth > 0 ? opt.depth : 12);
    std::ostringstream text;
    text << to_string(c.kind);
    if (c.kind == CompactKind::ContainsFiniteRank) text << " (y = " << c.finite_rank << ")";
    text << "\n" << c.certificate << "\n";
    emit(to_json(c), opt.format, text.str());
    return 0;
}

int run_emit(const Source& src, const Options& opt) {
    const SystemSpec spec = load_source(src);
    const json j = spec_to_json(spec);
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot write '" + opt.out_path + "'");
        out << j.dump(2) << "\n";
        std::cout << "spec written to " << opt.out_path << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int run_verify(const Options& opt) {
    std::vector<ExampleId> ids;
    bool all = opt.scopes.empty();
    for (const std::string& s : opt.scopes)
        if (s == "all") all = true;
    if (all)
        ids = canonical_gallery();
    else
        for (const std::string& s : opt.scopes) ids.push_back(ExampleId::parse(s));
    const SuiteReport r = run_suite(ids, opt.depth, opt.trials);
    if (opt.format == "json") {
        json checks = json::array();
        for (const CheckRecord& c : r.checks) {
            json jc{{"check", c.check}, {"scope", c.scope}, {"status", c.passed ? "pass" : "fail"}};
            if (!c.witness.empty()) jc["witness"] = c.witness;
            checks.push_back(jc);
        }
        std::cout << json{{"checks", checks},
                          {"depth", r.depth},
                          {"trials", r.trials},
                          {"status", r.passed ? "pass" : "fail"}}
                         .dump(2)
                  << "\n";
    } else {
        for (const CheckRecord& c : r.checks)
            std::cout << (c.passed ? "[pass] " : "[FAIL] ") << c.check << "  (" << c.scope << ")"
                      << (c.witness.empty() ? "" : "  " + c.witness) << "\n";
        std::cout << (r.passed ? "all checks passed" : "FAILURES present") << " at depth "
                  << r.depth << ", trials " << r.trials << "\n";
    }
    return r.passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for direct limits of upper-triangular matrix algebras under "
                 "compression embeddings"};
    app.require_subcommand(1);

    Options opt;
    Source src;
    app.add_option("--format", opt.format, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));

    enum class Action { None, Validate, Compose, Repr, Bratteli, Envelope, Compacts, Emit, Verify };
    Action action = Action::None;

    auto add_common = [&](CLI::App* cmd, Action a, bool needs_spec) {
        if (needs_spec)
            cmd->add_option("spec", src.spec_path, "system spec file (JSON)")->required();
        cmd->callback([&action, a]() {
            if (action == Action::None) action = a;
        });
        return cmd;
    };

    auto wire_actions = [&](CLI::App* parent, bool needs_spec) {
        auto* validate = add_common(parent->add_subcommand("validate", "parse and validate a presentation"),
                                    Action::Validate, needs_spec);
        validate->add_option("--depth", opt.depth, "levels to materialize for the dimension list");
        auto* compose_cmd = add_common(parent->add_subcommand("compose", "normal form of phi_{j,k}"),
                                       Action::Compose, needs_spec);
        compose_cmd->add_option("--from", opt.from_level, "source level j")->required();
        compose_cmd->add_option("--to", opt.to_level, "target level k")->required();
        auto* repr = add_common(parent->add_subcommand("repr", "anchored representation window"),
                                Action::Repr, needs_spec);
        repr->add_option("--level", opt.level, "representation level k")->required();
        repr->add_option("--depth", opt.depth, "probe depth m");
        repr->add_option("--window", opt.window, "restrict the printed layout to [a, b]")
            ->expected(2);
        auto* brat = add_common(parent->add_subcommand("bratteli", "Bratteli diagram of the probed envelope"),
                                Action::Bratteli, needs_spec);
        brat->add_option("--levels", opt.levels, "number of levels")->required();
        brat->add_option("--depth", opt.depth, "probe depth");
        brat->add_option("--dot", opt.dot_path, "write DOT to this path");
        auto* env = add_common(parent->add_subcommand("envelope", "boundary evidence report"),
                               Action::Envelope, needs_spec);
        env->add_option("--levels", opt.levels, "horizon")->required();
        env->add_option("--depth", opt.depth, "probe depth");
        auto* comp = add_common(parent->add_subcommand("compacts", "compact-operator classification"),
                                Action::Compacts, needs_spec);
        comp->add_option("--depth", opt.depth, "probe depth");
        auto* em = add_common(parent->add_subcommand("emit", "write the spec file"),
                              Action::Emit, needs_spec);
        em->add_option("-o,--out", opt.out_path, "output path (stdout when omitted)");
    };

    wire_actions(&app, true);

    CLI::App* example = app.add_subcommand("example", "operate on a gallery example A..G");
    example->add_option("tag", src.example_tag, "example tag, e.g. D or A(2,1)")->required();
    example->require_subcommand(1);
    wire_actions(example, false);

    CLI::App* verify = app.add_subcommand("verify", "run the verification battery");
    verify->add_option("--scope", opt.scopes, "example tags (default: all)");
    verify->add_option("--depth", opt.depth, "probe depth (default env CALIM_VERIFY_DEPTH or 6)");
    verify->add_option("--trials", opt.trials,
                       "random trials (default env CALIM_VERIFY_TRIALS or 50)");
    verify->callback([&action]() { action = Action::Verify; });

    CLI11_PARSE(app, argc, argv);

    try {
        switch (action) {
            case Action::Validate: return run_validate(src, opt);
            case Action::Compose: return run_compose(src, opt);
            case Action::Repr: return run_repr(src, opt);
            case Action::Bratteli: return run_bratteli(src, opt);
            case Action::Envelope: return run_envelope(src, opt);
            case Action::Compacts: return run_compacts(src, opt);
            case Action::Emit: return run_emit(src, opt);
            case Action::Verify: return run_verify(opt);
            case Action::None: break;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "no action selected\n";
    return 1;
}
