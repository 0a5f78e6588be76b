#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epmd/dataset.hpp"
#include "epmd/epmd.hpp"
#include "epmd/featurize.hpp"
#include "epmd/graph.hpp"
#include "epmd/linear_models.hpp"
#include "epmd/representations.hpp"
#include "epmd/skipgram.hpp"

namespace epmd {

// Prior-work single-task LSTM mortality AuROC, shown as a reference line in
// mort report tables.
inline constexpr double kLstmMortReference = 0.855;

// Access-audited label access: test-split labels may only be read inside an
// EvaluationScope; any earlier read throws TestLabelAccess.
class LabelStore {
  public:
    explicit LabelStore(const Dataset& ds);

    bool is_test(const std::string& id) const;
    int mort(const std::string& id) const;
    double los(const std::string& id) const;
    int dd_class(const std::string& id) const;  // index into dd_classes()
    std::size_t test_reads() const { return test_reads_; }

    class EvaluationScope {
      public:
        explicit EvaluationScope(LabelStore& s) : store_(&s) { ++s.eval_depth_; }
        ~EvaluationScope() {
            if (store_) --store_->eval_depth_;
        }
        EvaluationScope(const EvaluationScope&) = delete;
        EvaluationScope& operator=(const EvaluationScope&) = delete;
        EvaluationScope(EvaluationScope&& o) noexcept : store_(o.store_) { o.store_ = nullptr; }

      private:
        LabelStore* store_;
    };
    EvaluationScope evaluation_scope() { return EvaluationScope(*this); }

  private:
    struct Entry {
        bool test = false;
        std::optional<int> mort;
        std::optional<double> los;
        std::optional<int> dd;
    };
    const Entry& entry(const std::string& id) const;

    std::map<std::string, Entry> entries_;
    int eval_depth_ = 0;
    mutable std::size_t test_reads_ = 0;

    friend class EvaluationScope;
};

struct ExperimentPlan {
    std::vector<Task> tasks{Task::mort, Task::los, Task::dd};
    std::vector<ReprFlavor> representations{ReprFlavor::raw, ReprFlavor::embedded,
                                            ReprFlavor::combined};
    std::vector<std::size_t> sizes{10, 20, 50, 100, 500, 1000, 5000};
    bool include_full_size = true;  // the "all" row
    std::size_t repeats = 20;
    std::vector<std::string> modality_sets{"timeseries_only", "all"};
    std::uint64_t seed = 1;
    TrainConfig train;
    SkipgramConfig skipgram;
    double graph_threshold = 0.9;
    std::string external_vectors;  // precomputed word vectors, optional
    std::string grid_file;         // hyperparameter grid override, optional
    std::size_t cv_folds = 3;
    std::size_t threads = 1;
    bool resume = true;  // reuse per-cell checkpoints when present
};

// JSON config: any subset of the plan fields; "sizes" accepts numbers plus
// the string "all".
ExperimentPlan plan_from_json_file(const std::string& path);

std::vector<std::string> raw_type_ids(const FeaturizedDataset& fd, const std::string& modality_set);
std::vector<std::string> ep_type_ids(const FeaturizedDataset& fd, const std::string& modality_set);
bool ep_uses_identity(const std::string& modality_set);

struct GraphArtifacts {
    std::vector<AdmissionDocument> docs;
    WordVectors word_vectors;
    std::vector<std::vector<double>> sentence_vectors;
    AffinityGraph graph;
};

GraphArtifacts build_graph_artifacts(const Dataset& ds, const SkipgramConfig& config,
                                     double threshold, const std::string& external_vectors);

struct CellResult {
    Task task = Task::mort;
    std::string modality;
    ReprFlavor repr = ReprFlavor::raw;
    std::size_t size = 0;
    bool full_train = false;
    std::size_t repeat = 0;
    double value = 0.0;
};

struct ComparisonResult {
    Task task = Task::mort;
    std::string modality;
    std::size_t size = 0;
    bool full_train = false;
    ReprFlavor a = ReprFlavor::embedded;
    ReprFlavor b = ReprFlavor::raw;
    std::size_t n = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double t = 0.0;
    double p = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

struct ReportMeta {
    std::uint64_t seed = 0;
    std::size_t n_episodes = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t graph_edges = 0;
    std::size_t isolated_nodes = 0;
};

struct ExperimentReport {
    std::vector<CellResult> cells;
    std::vector<ComparisonResult> comparisons;
    ReportMeta meta;
};

// Full pipeline: featurize, graph, per-modality-set embedding training (all
// episodes, unsupervised), then per (task, size, repeat, representation)
// subset fits with 3-fold CV and test evaluation. Writes results.csv,
// significance.csv, report.md plus graph/embedding artifacts under out_dir.
ExperimentReport run_experiment(const ExperimentPlan& plan, const Dataset& ds,
                                const std::string& out_dir);

// Single-cell fit + evaluation; exposed for the fit/eval subcommands.
double evaluate_cell(const RepresentationMatrix& rm, LabelStore& labels, Task task,
                     const std::vector<std::string>& subset_ids,
                     const std::vector<std::string>& test_ids, const LogisticGrid& lgrid,
                     const RidgeGrid& rgrid, std::size_t cv_folds, std::uint64_t cv_seed);

std::vector<ComparisonResult> compute_comparisons(const std::vector<CellResult>& cells,
                                                  double alpha = 0.05);

void write_results_csv(const std::vector<CellResult>& cells, const ReportMeta& meta,
                       const std::string& path);
std::vector<CellResult> load_results_csv(const std::string& path, ReportMeta* meta = nullptr);
void write_significance_csv(const std::vector<ComparisonResult>& comps, const std::string& path);
void write_report_md(const std::vector<CellResult>& cells,
                     const std::vector<ComparisonResult>& comps, const ReportMeta& meta,
                     const std::string& path);

}  // namespace epmd
