#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include "case_record.hpp"
#include "normalizer.hpp"
#include "parser.hpp"

namespace bonedx {

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingCategory : std::runtime_error {
    explicit MissingCategory(std::string caseId)
        : std::runtime_error("case " + caseId + " has no disease category or no location"), id(std::move(caseId)) {}
    std::string id;
};

// ---------------------------------------------------------------------------
// Files

inline std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw CorpusError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string sha256Hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
        throw CorpusError("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

#ifndef BONEDX_DATA_DIR
#define BONEDX_DATA_DIR "data"
#endif

// $BONEDX_DATA if set, else the directory baked in at build time.
inline std::filesystem::path dataDirectory() {
    if (const char* env = std::getenv("BONEDX_DATA"); env && *env) return env;
    return BONEDX_DATA_DIR;
}

struct BoneDx {
    Ontology ontology;
    std::vector<Rule> rules;
    Lexicon lexicon;
};

// Checks every "<sha256>  <file>" line of CHECKSUMS against the files.
inline void verifyChecksums(const std::filesystem::path& dir) {
    std::istringstream lines(readFile(dir / "CHECKSUMS"));
    std::string line;
    int checked = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string digest, name;
        if (!(ls >> digest >> name)) throw CorpusError("malformed CHECKSUMS line: " + line);
        if (sha256Hex(readFile(dir / name)) != digest)
            throw CorpusError("checksum mismatch for " + (dir / name).string());
        ++checked;
    }
    if (checked == 0) throw CorpusError("CHECKSUMS lists no files");
}

inline std::string describeErrors(const std::vector<ParseError>& errs) {
    std::string s;
    for (const auto& e : errs) s += e.describe() + "\n";
    return s;
}

inline BoneDx loadBoneDx(const std::filesystem::path& dir = dataDirectory()) {
    verifyChecksums(dir);
    BoneDx c;
    auto onto = parseOntology(readFile(dir / "bonedx.bdo"), (dir / "bonedx.bdo").string());
    if (!onto.ok()) throw CorpusError(describeErrors(onto.errors));
    c.ontology = std::move(*onto.value);
    const Signature sig = declaredSignature(c.ontology);
    auto rules = parseRules(readFile(dir / "bonedx.bdr"), &sig, (dir / "bonedx.bdr").string());
    if (!rules.ok()) throw CorpusError(describeErrors(rules.errors));
    c.rules = std::move(*rules.value);
    auto lex = loadLexicon(readFile(dir / "bonedx.lex"), &c.ontology, (dir / "bonedx.lex").string());
    if (!lex.ok()) throw CorpusError(describeErrors(lex.errors));
    c.lexicon = std::move(*lex.value);
    return c;
}

// ---------------------------------------------------------------------------
// Synthetic cases

struct DistributionSpec {
    std::vector<std::pair<std::string, double>> disease, anatomy;
    std::size_t total = 0;

    void validate() const {
        for (const auto* set : {&disease, &anatomy}) {
            double sum = 0;
            for (const auto& [_, p] : *set) {
                if (p < 0) throw std::invalid_argument("negative proportion");
                sum += p;
            }
            if (sum < 0.999 || sum > 1.001) throw std::invalid_argument("proportions must sum to 1");
        }
    }
};

// The published counts (876/241/130 and 658/389/200 of 1247) as exact
// proportions; largest-remainder quotas then reproduce them at n = 1247.
inline DistributionSpec publishedDistribution(std::size_t total = 1247) {
    return {{{"Trauma", 876.0 / 1247}, {"Tumor", 241.0 / 1247}, {"Inflammatory", 130.0 / 1247}},
            {{"LowerLimb", 658.0 / 1247}, {"UpperLimb", 389.0 / 1247}, {"Trunk", 200.0 / 1247}},
            total};
}

// The rounded published percentages taken at face value. At n = 1247 the
// quotas come out 875/241/131, not the published counts.
inline DistributionSpec roundedPercentDistribution(std::size_t total = 1247) {
    return {{{"Trauma", 0.702}, {"Tumor", 0.193}, {"Inflammatory", 0.105}},
            {{"LowerLimb", 0.528}, {"UpperLimb", 0.312}, {"Trunk", 0.160}},
            total};
}

// Largest-remainder apportionment; ties go to the earlier category.
inline std::vector<std::size_t> quotas(const std::vector<std::pair<std::string, double>>& props, std::size_t total) {
    std::vector<std::size_t> q(props.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        const double exact = props[i].second * static_cast<double>(total);
        q[i] = static_cast<std::size_t>(exact + 1e-9);
        if (static_cast<double>(q[i]) > exact) q[i] = static_cast<std::size_t>(exact);
        assigned += q[i];
        rem.emplace_back(exact - static_cast<double>(q[i]), i);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total && !rem.empty(); ++k, ++assigned) ++q[rem[k % rem.size()].second];
    return q;
}

namespace detail {

// Platform-independent draws from mt19937_64 (the std distributions are not
// specified bit-for-bit).
class CaseRng {
public:
    explicit CaseRng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do x = eng_();
        while (x >= limit);
        return x % n;
    }
    bool chance(unsigned percent) { return below(100) < percent; }
    template <typename T>
    const T& pick(const std::vector<T>& xs) { return xs[below(xs.size())]; }
    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

struct DiseaseOption {
    std::string id;
    std::vector<std::string> sites; // empty: the region itself is the only location
};

// Diseases per (category, region), each with the sites it may occur at.
inline const std::vector<DiseaseOption>& diseaseOptions(const std::string& category, const std::string& region) {
    static const std::map<std::pair<std::string, std::string>, std::vector<DiseaseOption>> table{
        {{"Trauma", "LowerLimb"},
         {{"Fracture", {"Femur", "Tibia", "LeftLeg", "RightLeg"}},
          {"FemoralNeckFracture", {"FemoralNeck"}},
          {"HipFracture", {"Hip"}},
          {"Sprain", {"Foot"}},
          {"LigamentInjury", {"Knee"}},
          {"MeniscalTear", {"Knee"}}}},
        {{"Trauma", "UpperLimb"}, {{"Fracture", {}}, {"RotatorCuffInjury", {}}, {"Sprain", {}}}},
        {{"Trauma", "Trunk"}, {{"Fracture", {"Spine"}}}},
        {{"Tumor", "LowerLimb"}, {{"Osteosarcoma", {"Femur", "Tibia"}}, {"CartilaginousTumor", {"Femur", "Tibia"}}}},
        {{"Tumor", "UpperLimb"}, {{"Osteosarcoma", {}}, {"CartilaginousTumor", {}}}},
        {{"Tumor", "Trunk"}, {{"Osteosarcoma", {"Spine"}}, {"CartilaginousTumor", {"Spine"}}}},
        {{"Inflammatory", "LowerLimb"}, {{"Osteomyelitis", {"Femur", "Tibia"}}, {"PlantarFasciitis", {"Foot"}}}},
        {{"Inflammatory", "UpperLimb"}, {{"Osteomyelitis", {}}}},
        {{"Inflammatory", "Trunk"}, {{"Osteomyelitis", {"Spine"}}}},
    };
    static const std::vector<DiseaseOption> none;
    auto it = table.find({category, region});
    return it == table.end() ? none : it->second;
}

// Surface phrases used to write diagnosisText; each maps back through the
// bundled lexicon to the identifier it stands for.
inline const std::map<std::string, std::string>& surfacePhrases() {
    static const std::map<std::string, std::string> m{
        {"Fracture", "Fracture"},
        {"FemoralNeckFracture", "Femoral-Neck Fracture"},
        {"HipFracture", "Hip fracture"},
        {"Sprain", "Sprain"},
        {"LigamentInjury", "Ligament injury"},
        {"MeniscalTear", "Meniscal tear"},
        {"RotatorCuffInjury", "Rotator-cuff injury"},
        {"Osteosarcoma", "Osteosarcoma"},
        {"CartilaginousTumor", "Cartilaginous tumor"},
        {"Osteomyelitis", "Osteomyelitis"},
        {"PlantarFasciitis", "Plantar fasciitis"},
        {"LowerLimb", "lower limb"},
        {"UpperLimb", "upper limb"},
        {"Trunk", "trunk"},
        {"Femur", "femur"},
        {"Tibia", "tibia"},
        {"LeftLeg", "left leg"},
        {"RightLeg", "right leg"},
        {"FemoralNeck", "femoral neck"},
        {"Hip", "hip"},
        {"Knee", "knee"},
        {"Foot", "foot"},
        {"Spine", "spine"},
        {"XRay", "X-ray"},
        {"CT", "CT"},
        {"MRI", "MRI"},
    };
    return m;
}

inline std::string categoryClass(const std::string& category) {
    if (category == "Inflammatory") return "Inflammation";
    return category;
}

} // namespace detail

// Deterministic in (seed, spec). Categories and regions are dealt by quota
// and shuffled independently; everything else is drawn per case.
inline std::vector<CaseRecord> generateCases(std::uint64_t seed, const DistributionSpec& spec) {
    spec.validate();
    detail::CaseRng rng(seed);
    auto deal = [&](const std::vector<std::pair<std::string, double>>& props) {
        std::vector<std::string> out;
        const auto q = quotas(props, spec.total);
        for (std::size_t i = 0; i < props.size(); ++i) out.insert(out.end(), q[i], props[i].first);
        rng.shuffle(out);
        return out;
    };
    const auto categories = deal(spec.disease);
    const auto regions = deal(spec.anatomy);

    static const std::vector<std::string> severities(kSeverityValues.begin(), kSeverityValues.end());
    static const std::vector<std::string> frequencies(kFrequencyValues.begin(), kFrequencyValues.end());
    static const std::map<std::string, std::vector<std::string>> causesBy{
        {"Trauma", {"PhysicalActivity", "Environmental", "Lifestyle"}},
        {"Tumor", {"Genetic", "FamilyHistory", "Pollution"}},
        {"Inflammatory", {"Environmental", "Diet", "Lifestyle"}}};

    const std::size_t width = std::max<std::size_t>(4, std::to_string(spec.total).size());
    std::vector<CaseRecord> out;
    out.reserve(spec.total);
    for (std::size_t i = 0; i < spec.total; ++i) {
        CaseRecord c;
        std::string num = std::to_string(i + 1);
        c.id = "case_" + std::string(width - num.size(), '0') + num;
        const std::string& category = categories[i];
        const std::string& region = regions[i];
        c.diseaseCategory = category;
        c.age = static_cast<std::int64_t>(5 + rng.below(86));

        const auto& options = detail::diseaseOptions(category, region);
        const detail::DiseaseOption* disease = options.empty() ? nullptr : &rng.pick(options);
        c.locations.push_back(region);
        if (disease && !disease->sites.empty()) c.locations.push_back(rng.pick(disease->sites));

        c.symptoms.push_back({"Pain", rng.pick(severities), rng.pick(frequencies)});
        if (rng.chance(50)) c.symptoms.push_back({"Swelling", rng.pick(severities), rng.pick(frequencies)});
        if (rng.chance(35)) c.symptoms.push_back({"LimitedMobility", rng.pick(severities), rng.pick(frequencies)});

        if (auto it = causesBy.find(category); it != causesBy.end()) c.causes.push_back(rng.pick(it->second));
        if (category == "Trauma") {
            c.imaging = {"XRay"};
        } else if (category == "Tumor") {
            c.imaging = {"XRay", rng.chance(50) ? "MRI" : "CT"};
        } else {
            c.imaging = {"MRI"};
        }

        const auto& phrase = detail::surfacePhrases();
        const std::string diseaseId = disease ? disease->id : detail::categoryClass(category);
        auto say = [&](const std::string& id) {
            auto it = phrase.find(id);
            return it == phrase.end() ? id : it->second;
        };
        std::string text = say(diseaseId) + " of the " + say(c.locations.back());
        text += "; " + *c.symptoms[0].severity + " pain";
        text += " (" + say(c.imaging[0]) + ")";
        c.diagnosisText = text;
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Statistics

struct CategoryCount {
    std::string name;
    std::size_t count = 0;
    int tenthsPercent = 0; // percentage x 10, rounded half up

    std::string percent() const {
        return std::to_string(tenthsPercent / 10) + "." + std::to_string(tenthsPercent % 10);
    }
};

struct StatsTable {
    std::size_t total = 0;
    std::vector<CategoryCount> disease, anatomy;
    std::vector<std::string> notes;

    const CategoryCount* find(const std::string& name) const {
        for (const auto* set : {&disease, &anatomy})
            for (const auto& c : *set)
                if (c.name == name) return &c;
        return nullptr;
    }
};

inline int tenthsOfPercent(std::size_t count, std::size_t total) {
    if (total == 0) return 0;
    return static_cast<int>((2000 * count + total) / (2 * total)); // round(1000 * count / total), half up
}

// Published counts and one-decimal percentages of the 1,247-case dataset.
struct PublishedFigure {
    const char* category;
    std::size_t count;
    int tenthsPercent;
};
inline constexpr std::size_t kPublishedTotal = 1247;
inline constexpr PublishedFigure kPublishedFigures[] = {
    {"Trauma", 876, 702},    {"Tumor", 241, 193},     {"Inflammatory", 130, 105},
    {"LowerLimb", 658, 528}, {"UpperLimb", 389, 312}, {"Trunk", 200, 160},
};

inline StatsTable computeStats(const std::vector<CaseRecord>& cases) {
    static const std::vector<std::string> diseaseOrder{"Trauma", "Tumor", "Inflammatory"};
    static const std::vector<std::string> regionOrder{"LowerLimb", "UpperLimb", "Trunk"};
    std::map<std::string, std::size_t> dc, ac;
    for (const auto& c : cases) {
        if (!c.diseaseCategory || c.diseaseCategory->empty() || c.locations.empty()) throw MissingCategory(c.id);
        ++dc[*c.diseaseCategory];
        std::string region = "OtherLocation";
        for (const auto& l : c.locations)
            if (std::find(regionOrder.begin(), regionOrder.end(), l) != regionOrder.end()) {
                region = l;
                break;
            }
        ++ac[region];
    }
    StatsTable t;
    t.total = cases.size();
    auto fill = [&](const std::map<std::string, std::size_t>& counts, const std::vector<std::string>& order,
                    std::vector<CategoryCount>& dst) {
        for (const auto& name : order)
            if (auto it = counts.find(name); it != counts.end())
                dst.push_back({name, it->second, tenthsOfPercent(it->second, t.total)});
        for (const auto& [name, n] : counts)
            if (std::find(order.begin(), order.end(), name) == order.end())
                dst.push_back({name, n, tenthsOfPercent(n, t.total)});
    };
    fill(dc, diseaseOrder, t.disease);
    fill(ac, regionOrder, t.anatomy);
    if (t.total == kPublishedTotal) {
        for (const auto& f : kPublishedFigures) {
            const auto* c = t.find(f.category);
            if (c && c->count == f.count && c->tenthsPercent != f.tenthsPercent)
                t.notes.push_back(std::string(f.category) + ": " + std::to_string(f.count) + "/" +
                                  std::to_string(kPublishedTotal) + " rounds to " + c->percent() +
                                  "%; the published distribution lists " + std::to_string(f.tenthsPercent / 10) +
                                  "." + std::to_string(f.tenthsPercent % 10) + "% for the same count");
        }
    }
    return t;
}

inline std::string renderStats(const StatsTable& t) {
    std::ostringstream os;
    os << "total: " << t.total << "\n";
    auto block = [&](const char* title, const std::vector<CategoryCount>& xs) {
        os << title << ":\n";
        for (const auto& c : xs) os << "  " << c.name << ": " << c.count << " (" << c.percent() << "%)\n";
    };
    block("disease", t.disease);
    block("anatomy", t.anatomy);
    for (const auto& n : t.notes) os << "note: " << n << "\n";
    return os.str();
}

inline nlohmann::ordered_json toJson(const StatsTable& t) {
    nlohmann::ordered_json j;
    j["total"] = t.total;
    auto block = [](const std::vector<CategoryCount>& xs) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& c : xs) a.push_back({{"category", c.name}, {"count", c.count}, {"percent", c.percent()}});
        return a;
    };
    j["disease"] = block(t.disease);
    j["anatomy"] = block(t.anatomy);
    j["notes"] = t.notes;
    return j;
}

} // namespace bonedx
