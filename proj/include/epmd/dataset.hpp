#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace epmd {

enum class ModalityKind { numeric_group, bag_of_words, categorical_group };

struct ModalitySchema {
    std::string type_id;
    ModalityKind kind = ModalityKind::numeric_group;
    std::vector<std::string> attribute_names;
    // Known only after featurization for bag_of_words types.
    std::size_t domain_dim = 0;
};

enum class Task { mort, los, dd };
enum class TaskKind { binary, regression, multiclass };

struct TaskSpec {
    Task name = Task::mort;
    TaskKind kind = TaskKind::binary;
    int num_classes = 2;  // 2 for mort, 6 for dd, unused for los
};

TaskSpec task_spec(Task t);
Task parse_task(const std::string& name);
std::string task_name(Task t);

// The six discharge destination classes, in label-index order.
const std::vector<std::string>& dd_classes();

struct SeriesPoint {
    double t = 0.0;
    double value = 0.0;
};

struct Labels {
    std::optional<int> mort;
    std::optional<double> los;
    std::optional<std::string> dd;

    bool operator==(const Labels&) const = default;
};

struct Episode {
    std::string id;
    std::map<std::string, std::vector<SeriesPoint>> series;   // variable -> points sorted by t
    std::map<std::string, std::vector<std::string>> notes;    // note type -> concatenated tokens
    std::map<std::string, std::string> categoricals;          // absent key = missing
    Labels labels;
};

enum class Split { train, test };

struct Dataset {
    std::vector<ModalitySchema> schema;
    std::vector<Episode> episodes;
    std::map<std::string, Split> split;
    double window_hours = 48.0;

    std::vector<std::string> ids_in_split(Split s) const;
    const ModalitySchema* find_type(const std::string& type_id) const;
};

// Default attribute layout: one numeric group with the standard 17 ICU
// variables, one bag-of-words type per note type, a demographics group and
// an admission group (the latter feeds the graph and the raw baseline).
extern const std::vector<std::string> kDefaultVariables;
extern const std::vector<std::string> kDefaultNoteTypes;
extern const std::vector<std::string> kDemographicAttributes;
extern const std::vector<std::string> kAdmissionAttributes;

std::vector<ModalitySchema> make_schema(const std::vector<std::string>& variables,
                                        const std::vector<std::string>& note_types);

Dataset load_dataset(const std::string& dir, const std::vector<ModalitySchema>& schema,
                     double window_hours = 48.0);
void save_dataset(const Dataset& ds, const std::string& dir);

// Mapping files: lines "RAW<TAB>MAPPED", '#' comments allowed.
std::map<std::string, std::string> load_mapping(const std::string& path);
std::string map_category(const std::string& raw, const std::map<std::string, std::string>& mapping);

struct SyntheticConfig {
    std::size_t num_episodes = 200;
    std::size_t num_clusters = 4;
    double missing_rate_series = 0.4;
    double missing_rate_notes = 0.4;
    double missing_rate_categorical = 0.4;
    std::vector<std::string> variables = kDefaultVariables;
    std::vector<std::string> note_types = {"nursing", "radiology", "ecg"};
    double test_fraction = 0.2;
    double window_hours = 48.0;
};

Dataset generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

std::vector<std::string> sample_labeled_subset(const Dataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace epmd
