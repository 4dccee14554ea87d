// bonedx command-line tool. Exit codes: 0 ok, 1 bad input or validation
// failure, 2 inconsistent ontology, 3 tableau budget exhausted.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <bonedx/bonedx.hpp>

namespace fs = std::filesystem;
using namespace bonedx;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kInput = 1, kInconsistent = 2, kResource = 3 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string ontology, rules, lexicon, format = "text";
    std::uint64_t seed = 42;
    std::size_t budget = ReasonerOptions{}.nodeBudget;
    unsigned jobs = 1;
    bool json() const { return format == "json"; }
};

// Loads the bundled corpus unless --ontology points elsewhere. Custom
// ontologies get rules and a lexicon only when asked for.
class Resources {
public:
    explicit Resources(const Options& o) : opt_(o) {}

    const Ontology& ontology() {
        if (!onto_) {
            if (opt_.ontology.empty()) {
                loadBundled();
            } else {
                auto p = parseOntology(readFile(opt_.ontology), opt_.ontology);
                if (!p.ok()) throw InputError(describeErrors(p.errors));
                onto_ = std::move(*p.value);
            }
        }
        return *onto_;
    }

    const std::vector<Rule>& rules() {
        if (!rules_) {
            if (!opt_.rules.empty()) {
                const Signature sig = declaredSignature(ontology());
                auto p = parseRules(readFile(opt_.rules), &sig, opt_.rules);
                if (!p.ok()) throw InputError(describeErrors(p.errors));
                rules_ = std::move(*p.value);
            } else if (opt_.ontology.empty()) {
                loadBundled();
            } else {
                rules_.emplace();
            }
        }
        return *rules_;
    }

    const Lexicon& lexicon() {
        if (!lex_) {
            if (!opt_.lexicon.empty()) {
                auto p = loadLexicon(readFile(opt_.lexicon), &ontology(), opt_.lexicon);
                if (!p.ok()) throw InputError(describeErrors(p.errors));
                lex_ = std::move(*p.value);
            } else if (opt_.ontology.empty()) {
                loadBundled();
            } else {
                const fs::path path = dataDirectory() / "bonedx.lex";
                auto p = loadLexicon(readFile(path), nullptr, path.string());
                if (!p.ok()) throw InputError(describeErrors(p.errors));
                lex_ = std::move(*p.value);
            }
        }
        return *lex_;
    }

    ReasonerOptions reasonerOptions() const { return {opt_.budget}; }

    DiagnosisEngine engine() { return DiagnosisEngine(ontology(), rules(), lexicon(), reasonerOptions()); }

private:
    void loadBundled() {
        if (bundled_) return;
        BoneDx c = loadBoneDx();
        if (!onto_) onto_ = std::move(c.ontology);
        if (!rules_ && opt_.rules.empty()) rules_ = std::move(c.rules);
        if (!lex_ && opt_.lexicon.empty()) lex_ = std::move(c.lexicon);
        bundled_ = true;
    }

    const Options& opt_;
    std::optional<Ontology> onto_;
    std::optional<std::vector<Rule>> rules_;
    std::optional<Lexicon> lex_;
    bool bundled_ = false;
};

std::string slurp(const std::string& path) {
    try {
        return readFile(path);
    } catch (const CorpusError& e) {
        throw InputError(e.what());
    }
}

CaseRecord loadCase(const std::string& path) {
    auto p = parseCase(slurp(path), path);
    if (!p.ok()) throw InputError(describeErrors(p.errors));
    return *p.value;
}

std::vector<Assertion> loadFacts(const std::vector<std::string>& paths) {
    std::vector<Assertion> out;
    for (const auto& path : paths) {
        auto p = parseOntology(slurp(path), path);
        if (!p.ok()) throw InputError(describeErrors(p.errors));
        out.insert(out.end(), p.value->abox.begin(), p.value->abox.end());
    }
    return out;
}

Ontology withFacts(const Ontology& base, const std::vector<std::string>& paths) {
    Ontology o = base;
    for (const auto& path : paths) {
        auto p = parseOntology(slurp(path), path);
        if (!p.ok()) throw InputError(describeErrors(p.errors));
        o = merge(std::move(o), *p.value);
    }
    return o;
}

// Case files named directly or found (*.json, sorted) in named directories.
std::vector<std::string> expandCases(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (const auto& a : args) {
        if (fs::is_directory(a)) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(a))
                if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path().string());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(a);
        }
    }
    return out;
}

void printViolations(const std::vector<Violation>& vs, const std::string& where) {
    for (const auto& v : vs) std::cout << where << ": " << toString(v.kind) << ": " << v.message << "\n";
}

// ------------------------------------------------------------------ commands

int cmdValidate(Resources& res, const Options& opt, const std::vector<std::string>& cases) {
    int errors = 0;
    const Ontology& o = res.ontology();
    const std::string where = opt.ontology.empty() ? "bundled ontology" : opt.ontology;
    auto vs = validateSchema(o);
    printViolations(vs, where);
    errors += static_cast<int>(vs.size());
    if (!opt.rules.empty() || opt.ontology.empty()) {
        res.rules();
        for (const auto& w : lintRules(res.rules())) std::cout << "warning: " << w << "\n";
    }
    if (!opt.lexicon.empty() || opt.ontology.empty()) res.lexicon();

    if (!cases.empty()) {
        Reasoner r(o, res.reasonerOptions());
        const Hierarchy& h = r.classify();
        for (const auto& path : expandCases(cases)) {
            auto p = parseCase(slurp(path), path);
            for (const auto& e : p.errors) std::cout << e.describe() << "\n";
            errors += static_cast<int>(p.errors.size());
            if (!p.ok()) continue;
            try {
                CaseABox m = mapCase(*p.value, o, h, &res.lexicon());
                Ontology merged = o;
                merged.declaredIndividuals.insert(m.patient);
                merged.declaredIndividuals.insert(m.finding);
                merged.abox.insert(merged.abox.end(), m.facts.begin(), m.facts.end());
                auto cv = validateSchema(merged);
                printViolations(cv, path);
                errors += static_cast<int>(cv.size());
            } catch (const CaseMappingError& e) {
                for (const auto& pr : e.problems) std::cout << path << ": " << pr << "\n";
                errors += static_cast<int>(e.problems.size());
            }
        }
    }
    if (errors) {
        std::cout << errors << " problem(s)\n";
        return kInput;
    }
    std::cout << "ok\n";
    return kOk;
}

int cmdClassify(Resources& res, const Options& opt) {
    Reasoner r(res.ontology(), res.reasonerOptions());
    const Hierarchy& h = r.classify();
    if (opt.json())
        std::cout << h.toJson().dump(2) << "\n";
    else
        std::cout << h.toText();
    return kOk;
}

int cmdRealize(Resources& res, const Options& opt, const std::vector<std::string>& facts) {
    Reasoner r(withFacts(res.ontology(), facts), res.reasonerOptions());
    auto realized = r.realize();
    if (opt.json()) {
        json j = json::object();
        for (const auto& [ind, z] : realized) j[ind] = {{"mostSpecific", z.mostSpecific}, {"types", z.types}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& [ind, z] : realized) {
            std::cout << ind << ":";
            for (const auto& t : z.mostSpecific) std::cout << " " << t;
            std::cout << "\n";
        }
    }
    return kOk;
}

int cmdInfer(Resources& res, const Options& opt, const std::vector<std::string>& facts) {
    DiagnosisEngine engine(res.ontology(), res.rules(), Lexicon{}, res.reasonerOptions());
    const Inference inf = engine.infer(loadFacts(facts));
    const auto derived = inf.derived();
    if (opt.json()) {
        json a = json::array();
        for (auto i : derived) {
            const auto& e = inf.facts[i];
            json prem = json::array();
            for (auto p : e.premises) prem.push_back(FactBase::traceId(p));
            a.push_back({{"trace", FactBase::traceId(i)},
                         {"fact", renderFact(e.fact)},
                         {"rule", e.rule},
                         {"generation", e.generation},
                         {"premises", prem}});
        }
        std::cout << json{{"derived", a}, {"iterations", inf.iterations}}.dump(2) << "\n";
    } else {
        for (auto i : derived) {
            const auto& e = inf.facts[i];
            std::cout << FactBase::traceId(i) << " " << renderFact(e.fact) << " <- " << e.rule << " (";
            for (std::size_t k = 0; k < e.premises.size(); ++k)
                std::cout << (k ? ", " : "") << FactBase::traceId(e.premises[k]);
            std::cout << ")\n";
        }
        std::cout << derived.size() << " derived fact(s)\n";
    }
    return kOk;
}

int cmdDiagnose(Resources& res, const Options& opt, const std::vector<std::string>& args) {
    const auto paths = expandCases(args);
    if (paths.empty()) throw InputError("diagnose needs at least one case file or directory");
    std::vector<CaseRecord> cases;
    for (const auto& p : paths) cases.push_back(loadCase(p));
    res.ontology();
    res.rules();
    res.lexicon();

    std::vector<std::optional<DiagnosisReport>> reports(cases.size());
    const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(cases.size())));
    std::vector<std::exception_ptr> failures(jobs);
    auto work = [&](unsigned slot) {
        try {
            DiagnosisEngine engine = res.engine();
            for (std::size_t i = slot; i < cases.size(); i += jobs) reports[i] = diagnose(engine, cases[i]);
        } catch (...) {
            failures[slot] = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned s = 0; s < jobs; ++s) pool.emplace_back(work, s);
        for (auto& t : pool) t.join();
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);

    if (opt.json()) {
        if (reports.size() == 1) {
            std::cout << toJson(*reports[0]).dump(2) << "\n";
        } else {
            json a = json::array();
            for (const auto& r : reports) a.push_back(toJson(*r));
            std::cout << a.dump(2) << "\n";
        }
    } else {
        for (std::size_t i = 0; i < reports.size(); ++i) std::cout << (i ? "\n" : "") << renderReport(*reports[i]);
    }
    return kOk;
}

int cmdNormalize(Resources& res, const Options& opt, const std::optional<std::string>& text,
                 const std::optional<std::string>& casePath) {
    if (!text == !casePath) throw InputError("normalize needs exactly one of --text or --case");
    std::string raw;
    if (text) {
        raw = *text;
    } else {
        CaseRecord c = loadCase(*casePath);
        raw = c.diagnosisText.value_or("");
    }
    const NormalizationReport rep = normalize(raw, res.lexicon());
    if (opt.json()) {
        json m = json::array(), u = json::array();
        for (const auto& x : rep.matches) m.push_back({{"start", x.start}, {"end", x.end}, {"phrase", x.phrase}, {"id", x.id}});
        for (const auto& x : rep.unmatched) u.push_back({{"index", x.index}, {"token", x.token}});
        std::cout << json{{"tokens", rep.tokens}, {"matches", m}, {"unmatched", u}}.dump(2) << "\n";
    } else {
        std::cout << "tokens:";
        for (const auto& t : rep.tokens) std::cout << " " << t;
        std::cout << "\nmatches:\n";
        for (const auto& x : rep.matches) std::cout << "  [" << x.start << "," << x.end << ") \"" << x.phrase << "\" -> " << x.id << "\n";
        std::cout << "unmatched:";
        for (const auto& x : rep.unmatched) std::cout << " " << x.token;
        std::cout << "\n";
    }
    return kOk;
}

int cmdGenCases(const Options& opt, std::size_t total, const std::string& out) {
    if (out.empty()) throw InputError("gen-cases needs --out DIR");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw InputError("cannot create " + out + ": " + ec.message());
    const auto cases = generateCases(opt.seed, publishedDistribution(total));
    for (const auto& c : cases) {
        std::ofstream f(fs::path(out) / (c.id + ".json"), std::ios::binary);
        if (!(f << toJson(c).dump(2) << "\n")) throw InputError("cannot write to " + out);
    }
    std::cout << "wrote " << cases.size() << " case(s) to " << out << "\n";
    return kOk;
}

int cmdStats(const Options& opt, const std::string& dir) {
    if (!fs::is_directory(dir)) throw InputError("stats needs --cases DIR (an existing directory)");
    std::vector<CaseRecord> cases;
    for (const auto& p : expandCases({dir})) cases.push_back(loadCase(p));
    StatsTable t;
    try {
        t = computeStats(cases);
    } catch (const MissingCategory& e) {
        throw InputError(e.what());
    }
    if (opt.json())
        std::cout << toJson(t).dump(2) << "\n";
    else
        std::cout << renderStats(t);
    return kOk;
}

int cmdExplain(const std::string& trace, const std::string& reportPath) {
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(slurp(reportPath));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(reportPath + ": not a JSON report (run diagnose --format json): " + e.what());
    }
    std::optional<std::string> tree;
    if (report.is_array()) {
        for (const auto& r : report)
            if ((tree = explainTrace(r, trace))) break;
    } else {
        tree = explainTrace(report, trace);
    }
    if (!tree) throw InputError("trace " + trace + " is not in " + reportPath);
    std::cout << *tree;
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BoneDx ontology toolkit: parse, classify, realize, run rules, normalize text, diagnose cases"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--ontology", opt.ontology, "ontology file (default: bundled corpus)");
    app.add_option("--rules", opt.rules, "rule file (default: bundled rules with the bundled corpus)");
    app.add_option("--lexicon", opt.lexicon, "lexicon file (default: bundled lexicon)");
    app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", opt.seed, "random seed for gen-cases");
    app.add_option("--budget", opt.budget, "tableau node budget per query")->check(CLI::PositiveNumber);
    app.add_option("--jobs", opt.jobs, "worker threads for diagnose")->check(CLI::PositiveNumber);

    std::vector<std::string> validateCases, realizeFacts, inferFacts, diagnoseCases;
    std::string validatePath;
    auto* validate = app.add_subcommand("validate", "parse and schema-check the ontology, rules and cases");
    validate->add_option("path", validatePath, "ontology file (same as --ontology)");
    validate->add_option("--case", validateCases, "case JSON file or directory")->allow_extra_args(false);

    auto* classify = app.add_subcommand("classify", "print the classified concept hierarchy");
    auto* realizeCmd = app.add_subcommand("realize", "print most specific types of every individual");
    realizeCmd->add_option("--facts", realizeFacts, "extra ABox file(s) merged into the ontology");
    auto* infer = app.add_subcommand("infer", "saturate the ABox with the rules and print derived facts");
    infer->add_option("--facts", inferFacts, "extra ABox file(s)");
    auto* diagnoseCmd = app.add_subcommand("diagnose", "build a diagnosis report for case files");
    diagnoseCmd->add_option("cases", diagnoseCases, "case JSON files or directories")->required();

    std::optional<std::string> normText, normCase;
    auto* normalizeCmd = app.add_subcommand("normalize", "normalize text and map it to ontology terms");
    normalizeCmd->add_option("--text", normText, "raw text");
    normalizeCmd->add_option("--case", normCase, "case whose diagnosisText is normalized");

    std::size_t total = 1247;
    std::string outDir, casesDir, trace, reportPath;
    auto* gen = app.add_subcommand("gen-cases", "write synthetic case records");
    gen->add_option("--total", total, "number of cases");
    gen->add_option("--out", outDir, "output directory")->required();
    auto* stats = app.add_subcommand("stats", "category counts and percentages of a case directory");
    stats->add_option("--cases", casesDir, "case directory")->required();
    auto* explain = app.add_subcommand("explain", "print the proof tree of a trace in a JSON report");
    explain->add_option("--trace", trace, "trace id, e.g. t42")->required();
    explain->add_option("--report", reportPath, "report written by diagnose --format json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? kOk : kInput;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e) == 0 ? kOk : kInput;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (validate->parsed() && !validatePath.empty()) opt.ontology = validatePath;
        Resources res(opt);
        if (validate->parsed()) return cmdValidate(res, opt, validateCases);
        if (classify->parsed()) return cmdClassify(res, opt);
        if (realizeCmd->parsed()) return cmdRealize(res, opt, realizeFacts);
        if (infer->parsed()) return cmdInfer(res, opt, inferFacts);
        if (diagnoseCmd->parsed()) return cmdDiagnose(res, opt, diagnoseCases);
        if (normalizeCmd->parsed()) return cmdNormalize(res, opt, normText, normCase);
        if (gen->parsed()) return cmdGenCases(opt, total, outDir);
        if (stats->parsed()) return cmdStats(opt, casesDir);
        if (explain->parsed()) return cmdExplain(trace, reportPath);
    } catch (const Inconsistent& e) {
        std::cerr << "inconsistent: " << e.what() << "\n";
        return kInconsistent;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << (std::string(e.what()).ends_with("\n") ? "" : "\n");
        return kInput;
    }
    return kInput;
}
