#include "klm/query.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "klm/engine_c.hpp"
#include "klm/engine_cl.hpp"
#include "klm/engine_p.hpp"
#include "klm/engine_r.hpp"

namespace klm {

Verdict decide(const FormulaSet& gamma, Logic logic, const EngineOptions& opt) {
    switch (logic) {
    case Logic::C: return decide_c(gamma, opt);
    case Logic::CL: return decide_cl(gamma, opt);
    case Logic::P: return decide_p(gamma, opt);
    case Logic::R: return decide_r(gamma, opt);
    }
    throw std::invalid_argument("unknown logic");
}

FormulaSet query_set(const QueryRequest& req) {
    FormulaSet s;
    switch (req.mode) {
    case Mode::Sat:
        s.insert(req.kb.assertions.begin(), req.kb.assertions.end());
        if (req.query) s.insert(*req.query);
        break;
    case Mode::Valid: s.insert(Formula::neg(*req.query)); break;
    case Mode::Entails:
        s.insert(req.kb.assertions.begin(), req.kb.assertions.end());
        s.insert(Formula::neg(*req.query));
        break;
    }
    return s;
}

std::string format_model(const PointedModel& pm, OutputFormat fmt) {
    if (fmt == OutputFormat::Json) return model_to_json(pm).dump(2);
    return model_to_text(pm);
}

namespace {

const char* mode_name(Mode m) {
    switch (m) {
    case Mode::Sat: return "sat";
    case Mode::Valid: return "valid";
    case Mode::Entails: return "entails";
    }
    return "?";
}

const char* engine_name(EngineChoice e) {
    switch (e) {
    case EngineChoice::Default: return "default";
    case EngineChoice::Naive: return "naive";
    case EngineChoice::Oracle: return "oracle";
    case EngineChoice::Both: return "both";
    }
    return "?";
}

// yes/no in the terms of the request; the set tested is the refutation set
// for valid and entails, so UNSAT means yes there.
std::string answer(Mode m, std::optional<bool> sat) {
    if (!sat) return "unknown";
    switch (m) {
    case Mode::Sat: return *sat ? "satisfiable" : "unsatisfiable";
    case Mode::Valid: return *sat ? "not valid" : "valid";
    case Mode::Entails: return *sat ? "not entailed" : "entailed";
    }
    return "?";
}

int exit_for(Mode m, std::optional<bool> sat) {
    if (!sat) return exit_code::inconclusive;
    bool yes = m == Mode::Sat ? *sat : !*sat;
    return yes ? exit_code::yes : exit_code::no;
}

void indent(std::string& out, const std::string& text) {
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out += "  " + line + "\n";
}

}  // namespace

QueryReport run(const QueryRequest& req) {
    QueryReport rep;
    if (req.mode != Mode::Sat && !req.query) {
        rep.err = std::string("mode ") + mode_name(req.mode) + " needs a query formula\n";
        return rep;
    }
    if (req.mode == Mode::Valid && !req.kb.assertions.empty()) {
        rep.err = "mode valid takes a single formula and no knowledge base; use mode entails\n";
        return rep;
    }
    if (req.bound && *req.bound < 1) {
        rep.err = "the oracle bound must be at least 1\n";
        return rep;
    }
    if (req.engine == EngineChoice::Naive && req.logic != Logic::P && req.logic != Logic::R) {
        rep.err = "the naive engine is only available for p and r\n";
        return rep;
    }

    // language check with source positions
    std::string lang;
    for (std::size_t i = 0; i < req.kb.assertions.size(); ++i)
        for (const auto& e : validate_language(req.kb.assertions[i], req.logic, Layer::Base)) {
            int line = i < req.kb.lines.size() ? req.kb.lines[i] : static_cast<int>(i) + 1;
            lang += "kb line " + std::to_string(line) + ": " + e + "\n";
        }
    if (req.query)
        for (const auto& e : validate_language(*req.query, req.logic, Layer::Base)) lang += "query: " + e + "\n";
    if (!lang.empty()) {
        rep.err = lang;
        return rep;
    }

    const FormulaSet gamma = query_set(req);
    const int bound = req.bound.value_or(req.logic == Logic::R ? std::max(1, total_size(gamma)) : 4);
    const bool use_tableau = req.engine != EngineChoice::Oracle;
    const bool use_oracle = req.engine == EngineChoice::Oracle || req.engine == EngineChoice::Both;

    nlohmann::json j;
    j["logic"] = std::string(logic_name(req.logic));
    j["mode"] = mode_name(req.mode);
    j["engine"] = engine_name(req.engine);
    j["input"] = sorted_strings(gamma);
    std::string text;
    text += "logic: " + std::string(logic_name(req.logic)) + "\n";
    text += std::string("mode: ") + mode_name(req.mode) + "\n";
    text += std::string("engine: ") + engine_name(req.engine) + "\n";
    text += "input: " + to_string(gamma) + "\n";

    std::optional<bool> sat;
    std::optional<Verdict> v;
    std::optional<OracleResult> o;
    try {
        if (use_tableau) {
            EngineOptions opt;
            opt.naive = req.engine == EngineChoice::Naive;
            opt.trace = req.trace;
            v = decide(gamma, req.logic, opt);
            sat = v->sat();
        }
        if (use_oracle) {
            o = oracle_sat(gamma, req.logic, bound);
            if (!use_tableau) {
                if (o->sat)
                    sat = true;
                else if (o->definitive)
                    sat = false;
            }
        }
    } catch (const std::invalid_argument& e) {
        rep.err = std::string(e.what()) + "\n";
        return rep;
    }

    std::string status = sat ? (*sat ? "SAT" : "UNSAT") : "NO_MODEL_WITHIN_BOUND";
    j["status"] = status;
    j["answer"] = answer(req.mode, sat);
    text += "status: " + status + "\n";
    text += "answer: " + answer(req.mode, sat) + "\n";

    long long nodes = v ? v->stats.nodes : o->models_checked;
    int labels = v ? v->stats.labels : 0;
    long long millis = req.timing && v ? v->stats.millis : 0;
    j["stats"] = {{"nodes", nodes}, {"labels", labels}, {"millis", millis}};
    text += "stats: nodes=" + std::to_string(nodes) + " labels=" + std::to_string(labels) +
            " millis=" + std::to_string(millis) + "\n";

    bool disagree = false;
    if (o) {
        std::string ostatus = o->sat ? "SAT" : (o->definitive ? "UNSAT" : "NO_MODEL_WITHIN_BOUND");
        nlohmann::json oj = {{"status", ostatus}, {"bound", bound}, {"models_checked", o->models_checked},
                             {"definitive", o->definitive}};
        if (o->model) oj["model"] = model_to_json(*o->model);
        if (v) {
            std::string agreement = "agree";
            if ((!v->sat() && o->sat) || (v->sat() && !o->sat && o->definitive)) {
                agreement = "disagree";
                disagree = true;
            } else if (v->sat() && !o->sat) {
                agreement = "unconfirmed";
            }
            j["agreement"] = agreement;
            text += "oracle: " + ostatus + " (bound " + std::to_string(bound) + ", " +
                    std::to_string(o->models_checked) + " models checked)\n";
            text += "agreement: " + agreement + "\n";
        } else {
            text += "oracle: bound " + std::to_string(bound) + ", " + std::to_string(o->models_checked) +
                    " models checked\n";
        }
        j["oracle"] = oj;
    }

    const PointedModel* model = nullptr;
    if (v && v->model)
        model = &*v->model;
    else if (o && o->model)
        model = &*o->model;
    if (model) {
        j["model"] = model_to_json(*model);
        text += "model:\n";
        indent(text, model_to_text(*model));
    }
    if (v && v->trace && v->trace->root >= 0) {
        j["trace"] = v->trace->to_json();
        text += "trace:\n";
        indent(text, v->trace->to_text());
    }

    rep.out = req.output == OutputFormat::Json ? j.dump(2) + "\n" : text;
    if (disagree) {
        rep.err = "tableau and oracle disagree\n";
        rep.exit_code = exit_code::error;
    } else {
        rep.exit_code = exit_for(req.mode, sat);
    }
    return rep;
}

namespace {

std::string position_error(const std::string& source, const ParseError& e) {
    return source + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.detail() + "\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decide satisfiability, validity and entailment in the KLM logics C, CL, P and R"};
    std::string logic, mode = "sat", engine = "default", format = "text", kb_path, formula, query;
    std::optional<int> bound;
    bool trace = false, timing = false;
    app.add_option("--logic", logic, "c, cl, p or r")->required()->check(CLI::IsMember({"c", "cl", "p", "r"}));
    app.add_option("--mode", mode, "sat, valid or entails")->check(CLI::IsMember({"sat", "valid", "entails"}));
    app.add_option("--kb", kb_path, "knowledge base file, one formula per line");
    app.add_option("--formula", formula, "inline formula");
    app.add_option("--query", query, "query formula (entails)");
    app.add_option("--engine", engine, "default, naive, oracle or both")
        ->check(CLI::IsMember({"default", "naive", "oracle", "both"}));
    app.add_option("--bound", bound, "oracle model-size bound");
    app.add_option("--format,--output", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--trace", trace, "print the closed tableau on UNSAT");
    app.add_flag("--timing", timing, "report wall-clock time");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::yes;
    } catch (const CLI::ParseError& e) {
        err << "klmprove: " << e.what() << "\n";
        return exit_code::error;
    }
    if (!formula.empty() && !query.empty()) {
        err << "klmprove: give either --formula or --query, not both\n";
        return exit_code::error;
    }

    QueryRequest req;
    req.logic = *parse_logic(logic);
    req.mode = mode == "sat" ? Mode::Sat : mode == "valid" ? Mode::Valid : Mode::Entails;
    req.engine = engine == "default" ? EngineChoice::Default
                 : engine == "naive" ? EngineChoice::Naive
                 : engine == "oracle" ? EngineChoice::Oracle
                                      : EngineChoice::Both;
    req.bound = bound;
    req.output = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    req.trace = trace;
    req.timing = timing;

    if (!kb_path.empty()) {
        std::ifstream in(kb_path, std::ios::binary);
        if (!in) {
            err << "klmprove: cannot read " << kb_path << "\n";
            return exit_code::error;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            req.kb = parse_kb(ss.str());
        } catch (const KbError& e) {
            for (const auto& pe : e.errors()) err << position_error(kb_path, pe);
            return exit_code::error;
        }
    }
    const std::string& inline_text = formula.empty() ? query : formula;
    const char* source = formula.empty() ? "--query" : "--formula";
    if (!inline_text.empty()) {
        try {
            req.query = parse_formula(inline_text);
        } catch (const ParseError& e) {
            err << position_error(source, e);
            return exit_code::error;
        }
    }

    QueryReport rep = run(req);
    out << rep.out;
    if (!rep.err.empty()) err << "klmprove: " << rep.err;
    return rep.exit_code;
}

}  // namespace klm
