#include "epmd/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "epmd/errors.hpp"
#include "epmd/rng.hpp"
#include "json.hpp"

namespace epmd {

using nlohmann::json;

const std::vector<std::string> kDefaultVariables = {
    "Capillary refill rate",
    "Diastolic blood pressure",
    "Fraction inspired oxygen",
    "Glascow coma scale eye opening",
    "Glascow coma scale motor response",
    "Glascow coma scale total",
    "Glascow coma scale verbal response",
    "Glucose",
    "Heart Rate",
    "Height",
    "Mean blood pressure",
    "Oxygen saturation",
    "Respiratory rate",
    "Systolic blood pressure",
    "Temperature",
    "Weight",
    "pH",
};

const std::vector<std::string> kDefaultNoteTypes = {"nursing", "radiology", "respitory",
                                                    "ecg",     "echo",      "other"};

const std::vector<std::string> kDemographicAttributes = {"ethnicity", "gender", "age",
                                                         "insurance", "marital_status"};

const std::vector<std::string> kAdmissionAttributes = {"admission_type", "admission_location",
                                                       "diagnosis"};

TaskSpec task_spec(Task t) {
    switch (t) {
        case Task::mort: return {Task::mort, TaskKind::binary, 2};
        case Task::los: return {Task::los, TaskKind::regression, 0};
        case Task::dd: return {Task::dd, TaskKind::multiclass, 6};
    }
    throw InvalidConfig("unknown task");
}

Task parse_task(const std::string& name) {
    if (name == "mort") return Task::mort;
    if (name == "los") return Task::los;
    if (name == "dd") return Task::dd;
    throw InvalidConfig("unknown task: " + name);
}

std::string task_name(Task t) {
    switch (t) {
        case Task::mort: return "mort";
        case Task::los: return "los";
        case Task::dd: return "dd";
    }
    return "?";
}

const std::vector<std::string>& dd_classes() {
    static const std::vector<std::string> classes = {
        "HOME", "LEFT", "MORTALITY_INHOSPITAL", "REHAB", "SNF", "TRANSFER"};
    return classes;
}

std::vector<std::string> Dataset::ids_in_split(Split s) const {
    std::vector<std::string> out;
    for (const auto& e : episodes) {
        auto it = split.find(e.id);
        if (it != split.end() && it->second == s) out.push_back(e.id);
    }
    return out;
}

const ModalitySchema* Dataset::find_type(const std::string& type_id) const {
    for (const auto& t : schema)
        if (t.type_id == type_id) return &t;
    return nullptr;
}

std::vector<ModalitySchema> make_schema(const std::vector<std::string>& variables,
                                        const std::vector<std::string>& note_types) {
    std::vector<ModalitySchema> schema;
    schema.push_back({"timeseries", ModalityKind::numeric_group, variables, 0});
    for (const auto& nt : note_types)
        schema.push_back({"note_" + nt, ModalityKind::bag_of_words, {nt}, 0});
    schema.push_back({"demographics", ModalityKind::categorical_group, kDemographicAttributes, 0});
    schema.push_back({"admission", ModalityKind::categorical_group, kAdmissionAttributes, 0});
    return schema;
}

namespace {

std::set<std::string> note_types_of(const std::vector<ModalitySchema>& schema) {
    std::set<std::string> out;
    for (const auto& t : schema)
        if (t.kind == ModalityKind::bag_of_words)
            for (const auto& a : t.attribute_names) out.insert(a);
    return out;
}

std::set<std::string> categorical_attrs_of(const std::vector<ModalitySchema>& schema) {
    std::set<std::string> out;
    for (const auto& t : schema)
        if (t.kind == ModalityKind::categorical_group)
            for (const auto& a : t.attribute_names) out.insert(a);
    return out;
}

Episode parse_episode(const json& rec, const std::set<std::string>& variables,
                      const std::set<std::string>& note_types,
                      const std::set<std::string>& cat_attrs, double window, std::size_t line_no) {
    auto fail = [&](const std::string& msg) -> MalformedRecord {
        return MalformedRecord("episodes.jsonl line " + std::to_string(line_no) + ": " + msg);
    };
    Episode ep;
    if (!rec.contains("episode_id") || !rec["episode_id"].is_string())
        throw fail("missing episode_id");
    ep.id = rec["episode_id"].get<std::string>();

    if (rec.contains("series")) {
        for (const auto& [name, points] : rec["series"].items()) {
            if (!variables.count(name))
                throw UnknownAttribute("episodes.jsonl line " + std::to_string(line_no) +
                                       ": unknown series variable '" + name + "'");
            std::vector<SeriesPoint> pts;
            for (const auto& p : points) {
                if (!p.is_array() || p.size() != 2) throw fail("series point must be [t, value]");
                SeriesPoint sp{p[0].get<double>(), p[1].get<double>()};
                if (!(sp.t >= 0.0 && sp.t <= window))
                    throw fail("timestamp " + std::to_string(sp.t) + " outside [0, " +
                               std::to_string(window) + "]");
                pts.push_back(sp);
            }
            std::stable_sort(pts.begin(), pts.end(),
                             [](const SeriesPoint& a, const SeriesPoint& b) { return a.t < b.t; });
            ep.series[name] = std::move(pts);
        }
    }
    if (rec.contains("notes")) {
        for (const auto& [nt, tokens] : rec["notes"].items()) {
            if (!note_types.count(nt))
                throw UnknownAttribute("episodes.jsonl line " + std::to_string(line_no) +
                                       ": unknown note type '" + nt + "'");
            std::vector<std::string> toks;
            for (const auto& tk : tokens) toks.push_back(tk.get<std::string>());
            ep.notes[nt] = std::move(toks);
        }
    }
    if (rec.contains("categoricals")) {
        for (const auto& [name, value] : rec["categoricals"].items()) {
            if (!cat_attrs.count(name))
                throw UnknownAttribute("episodes.jsonl line " + std::to_string(line_no) +
                                       ": unknown categorical '" + name + "'");
            if (value.is_null()) continue;  // null means missing
            ep.categoricals[name] = value.get<std::string>();
        }
    }
    if (rec.contains("labels")) {
        const auto& labels = rec["labels"];
        if (labels.contains("mort")) {
            const int m = labels["mort"].get<int>();
            if (m != 0 && m != 1) throw fail("mort label must be 0 or 1");
            ep.labels.mort = m;
        }
        if (labels.contains("los")) ep.labels.los = labels["los"].get<double>();
        if (labels.contains("dd")) {
            const auto dd = labels["dd"].get<std::string>();
            const auto& classes = dd_classes();
            if (std::find(classes.begin(), classes.end(), dd) == classes.end())
                throw fail("dd label '" + dd + "' is not one of the 6 classes");
            ep.labels.dd = dd;
        }
    }
    return ep;
}

}  // namespace

Dataset load_dataset(const std::string& dir, const std::vector<ModalitySchema>& schema,
                     double window_hours) {
    Dataset ds;
    ds.schema = schema;
    ds.window_hours = window_hours;

    std::set<std::string> variables;
    for (const auto& t : schema)
        if (t.kind == ModalityKind::numeric_group)
            for (const auto& v : t.attribute_names) variables.insert(v);
    const auto note_types = note_types_of(schema);
    const auto cat_attrs = categorical_attrs_of(schema);

    const auto episodes_path = std::filesystem::path(dir) / "episodes.jsonl";
    std::ifstream in(episodes_path);
    if (!in) throw ValidationError("cannot open " + episodes_path.string());

    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw MalformedRecord("episodes.jsonl line " + std::to_string(line_no) + ": " +
                                  e.what());
        }
        Episode ep = parse_episode(rec, variables, note_types, cat_attrs, window_hours, line_no);
        if (!seen.insert(ep.id).second)
            throw DuplicateEpisodeId("duplicate episode_id '" + ep.id + "' at line " +
                                     std::to_string(line_no));
        ds.episodes.push_back(std::move(ep));
    }

    const auto split_path = std::filesystem::path(dir) / "split.csv";
    std::ifstream sp(split_path);
    if (!sp) throw ValidationError("cannot open " + split_path.string());
    std::string row;
    if (!std::getline(sp, row) || row != "episode_id,split")
        throw MalformedRecord("split.csv: expected header 'episode_id,split'");
    while (std::getline(sp, row)) {
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos) throw MalformedRecord("split.csv: bad row '" + row + "'");
        const std::string id = row.substr(0, comma);
        const std::string s = row.substr(comma + 1);
        if (!seen.count(id)) throw MalformedRecord("split.csv: unknown episode_id '" + id + "'");
        if (ds.split.count(id)) throw MalformedRecord("split.csv: episode_id '" + id + "' listed twice");
        if (s == "train")
            ds.split[id] = Split::train;
        else if (s == "test")
            ds.split[id] = Split::test;
        else
            throw MalformedRecord("split.csv: split must be train or test, got '" + s + "'");
    }
    for (const auto& e : ds.episodes)
        if (!ds.split.count(e.id))
            throw MalformedRecord("split.csv: episode '" + e.id + "' has no split assignment");
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / "episodes.jsonl");
    for (const auto& ep : ds.episodes) {
        json rec;
        rec["episode_id"] = ep.id;
        json series = json::object();
        for (const auto& [name, pts] : ep.series) {
            json arr = json::array();
            for (const auto& p : pts) arr.push_back(json::array({p.t, p.value}));
            series[name] = std::move(arr);
        }
        rec["series"] = std::move(series);
        json notes = json::object();
        for (const auto& [nt, toks] : ep.notes) notes[nt] = toks;
        rec["notes"] = std::move(notes);
        rec["categoricals"] = ep.categoricals;
        json labels = json::object();
        if (ep.labels.mort) labels["mort"] = *ep.labels.mort;
        if (ep.labels.los) labels["los"] = *ep.labels.los;
        if (ep.labels.dd) labels["dd"] = *ep.labels.dd;
        rec["labels"] = std::move(labels);
        out << rec.dump() << '\n';
    }
    std::ofstream sp(std::filesystem::path(dir) / "split.csv");
    sp << "episode_id,split\n";
    for (const auto& ep : ds.episodes)
        sp << ep.id << ',' << (ds.split.at(ep.id) == Split::train ? "train" : "test") << '\n';
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> load_mapping(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mapping file " + path);
    std::map<std::string, std::string> mapping;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto tab = t.find('\t');
        if (tab == std::string::npos)
            throw MalformedRecord("mapping file " + path + ": no tab in line '" + line + "'");
        mapping[trim(t.substr(0, tab))] = trim(t.substr(tab + 1));
    }
    return mapping;
}

std::string map_category(const std::string& raw, const std::map<std::string, std::string>& mapping) {
    const auto it = mapping.find(trim(raw));
    if (it == mapping.end()) throw UnmappedCategory("unmapped category '" + raw + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Synthetic generation. Episodes are drawn from latent clusters; the cluster
// drives the admission document (hence the affinity graph), the series
// statistics, the demographic distributions and the task labels, so that
// graph neighborhoods are informative about outcomes.
// ---------------------------------------------------------------------------

namespace {

struct ClusterModel {
    std::vector<double> series_mean;                 // per variable
    std::vector<std::string> diagnoses;              // fixed phrase variants
    std::vector<std::vector<std::string>> note_vocab;  // per note type
    double mort_p = 0.5;
    double los_mean = 3.0;
    int dd_favored = 0;
};

const std::vector<std::string> kAdmissionTypes = {"emergency", "elective", "urgent"};
const std::vector<std::string> kAdmissionLocations = {"emergency room admit",
                                                      "transfer from hospital",
                                                      "clinic referral"};
const std::vector<std::string> kEthnicities = {"WHITE", "BLACK", "HISPANIC", "ASIAN", "OTHER"};
const std::vector<std::string> kInsurances = {"Medicare", "Medicaid", "Private", "Self Pay"};
const std::vector<std::string> kMaritalStatuses = {"MARRIED", "SINGLE", "WIDOWED", "DIVORCED",
                                                   "SEPARATED"};

std::string pick_biased(rng::Engine& eng, const std::vector<std::string>& levels,
                        std::size_t favored, double bias) {
    if (rng::next_unit(eng) < bias) return levels[favored % levels.size()];
    return levels[rng::below(eng, levels.size())];
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
    if (config.num_episodes == 0) throw InvalidConfig("num_episodes must be positive");
    if (config.num_clusters == 0) throw InvalidConfig("num_clusters must be positive");
    for (double r : {config.missing_rate_series, config.missing_rate_notes,
                     config.missing_rate_categorical})
        if (r < 0.0 || r > 1.0) throw InvalidConfig("missingness rates must be in [0,1]");
    if (config.variables.empty()) throw InvalidConfig("variable list must be non-empty");

    const std::size_t K = config.num_clusters;
    rng::Engine eng(rng::derive_seed(seed, {0xda7a}));

    // Cluster-level parameters.
    std::vector<ClusterModel> clusters(K);
    for (std::size_t c = 0; c < K; ++c) {
        auto& cm = clusters[c];
        cm.series_mean.resize(config.variables.size());
        for (auto& m : cm.series_mean) m = rng::normal(eng, 0.0, 3.0);
        // Three fixed diagnosis phrases per cluster, sharing a two-token head
        // so that same-cluster admission documents overlap heavily.
        const std::string head = "dx" + std::to_string(c) + "a dx" + std::to_string(c) + "b";
        for (int v = 0; v < 3; ++v) {
            std::string phrase = head;
            for (int w = 0; w < 3; ++w)
                phrase += " dx" + std::to_string(c) + "v" + std::to_string(v) + "w" +
                          std::to_string(w);
            cm.diagnoses.push_back(phrase);
        }
        cm.note_vocab.resize(config.note_types.size());
        for (std::size_t t = 0; t < config.note_types.size(); ++t)
            for (int w = 0; w < 20; ++w)
                cm.note_vocab[t].push_back("c" + std::to_string(c) + "t" + std::to_string(t) +
                                           "w" + std::to_string(w));
        cm.mort_p = K > 1 ? 0.05 + 0.9 * static_cast<double>(c) / static_cast<double>(K - 1) : 0.5;
        cm.los_mean = 2.0 + 1.5 * static_cast<double>(c);
        cm.dd_favored = static_cast<int>(c % dd_classes().size());
    }
    std::vector<std::string> shared_note_words;
    for (int w = 0; w < 30; ++w) shared_note_words.push_back("common" + std::to_string(w));

    Dataset ds;
    ds.schema = make_schema(config.variables, config.note_types);
    ds.window_hours = config.window_hours;

    const int id_width = static_cast<int>(std::to_string(config.num_episodes - 1).size());
    for (std::size_t i = 0; i < config.num_episodes; ++i) {
        const std::size_t c = rng::below(eng, K);
        const auto& cm = clusters[c];
        Episode ep;
        std::ostringstream idoss;
        idoss << "e";
        idoss.width(id_width);
        idoss.fill('0');
        idoss << i;
        ep.id = idoss.str();

        // Time series: cluster mean + per-episode offset + sample noise.
        for (std::size_t v = 0; v < config.variables.size(); ++v) {
            const bool missing = rng::next_unit(eng) < config.missing_rate_series;
            const double offset = rng::normal(eng, 0.0, 0.5);
            const std::size_t n_samples = 3 + rng::below(eng, 8);
            if (missing) continue;
            std::vector<SeriesPoint> pts(n_samples);
            for (auto& p : pts) {
                p.t = rng::uniform(eng, 0.0, config.window_hours);
                p.value = cm.series_mean[v] + offset + rng::normal(eng, 0.0, 1.0);
            }
            std::stable_sort(pts.begin(), pts.end(),
                             [](const SeriesPoint& a, const SeriesPoint& b) { return a.t < b.t; });
            ep.series[config.variables[v]] = std::move(pts);
        }

        // Notes: mostly cluster vocabulary with some shared filler.
        for (std::size_t t = 0; t < config.note_types.size(); ++t) {
            const bool missing = rng::next_unit(eng) < config.missing_rate_notes;
            const std::size_t len = 20 + rng::below(eng, 21);
            if (missing) continue;
            std::vector<std::string> toks;
            toks.reserve(len);
            for (std::size_t w = 0; w < len; ++w) {
                if (rng::next_unit(eng) < 0.7)
                    toks.push_back(cm.note_vocab[t][rng::below(eng, cm.note_vocab[t].size())]);
                else
                    toks.push_back(shared_note_words[rng::below(eng, shared_note_words.size())]);
            }
            ep.notes[config.note_types[t]] = std::move(toks);
        }

        // Admission fields are always recorded; they feed the affinity graph.
        ep.categoricals["admission_type"] = pick_biased(eng, kAdmissionTypes, c, 0.6);
        ep.categoricals["admission_location"] = pick_biased(eng, kAdmissionLocations, c + 1, 0.6);
        ep.categoricals["diagnosis"] = cm.diagnoses[rng::below(eng, cm.diagnoses.size())];

        // Demographics, cluster-biased, each dropped at the categorical rate.
        struct DemoDraw {
            const char* name;
            std::string value;
        };
        const int age = std::clamp(
            static_cast<int>(std::lround(rng::normal(eng, 40.0 + 8.0 * static_cast<double>(c), 12.0))),
            18, 95);
        const DemoDraw demo[] = {
            {"ethnicity", pick_biased(eng, kEthnicities, c, 0.4)},
            {"gender", rng::next_unit(eng) < 0.5 ? "F" : "M"},
            {"age", std::to_string(age)},
            {"insurance", pick_biased(eng, kInsurances, c, 0.4)},
            {"marital_status", pick_biased(eng, kMaritalStatuses, c + 2, 0.4)},
        };
        for (const auto& d : demo) {
            const bool missing = rng::next_unit(eng) < config.missing_rate_categorical;
            if (!missing) ep.categoricals[d.name] = d.value;
        }

        // Labels, all driven by the cluster.
        ep.labels.mort = rng::next_unit(eng) < cm.mort_p ? 1 : 0;
        ep.labels.los = std::max(0.5, rng::normal(eng, cm.los_mean, 1.0));
        const auto& classes = dd_classes();
        if (rng::next_unit(eng) < 0.55)
            ep.labels.dd = classes[cm.dd_favored];
        else
            ep.labels.dd = classes[rng::below(eng, classes.size())];

        ds.split[ep.id] = rng::next_unit(eng) < config.test_fraction ? Split::test : Split::train;
        ds.episodes.push_back(std::move(ep));
    }
    return ds;
}

std::vector<std::string> sample_labeled_subset(const Dataset& ds, std::size_t n,
                                               std::uint64_t seed) {
    std::vector<std::string> train = ds.ids_in_split(Split::train);
    std::sort(train.begin(), train.end());  // a pure function of the id set
    if (n > train.size())
        throw SubsetTooLarge("requested " + std::to_string(n) + " of " +
                             std::to_string(train.size()) + " training episodes");
    rng::Engine eng(rng::derive_seed(seed, {0x5b5e7}));
    rng::shuffle(train, eng);
    train.resize(n);
    std::sort(train.begin(), train.end());
    return train;
}

}  // namespace epmd
