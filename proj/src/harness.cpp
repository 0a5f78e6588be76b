#include "epmd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "epmd/errors.hpp"
#include "epmd/metrics.hpp"
#include "epmd/rng.hpp"
#include "epmd/stats.hpp"

namespace fs = std::filesystem;

namespace epmd {

LabelStore::LabelStore(const Dataset& ds) {
    const auto& classes = dd_classes();
    for (const auto& ep : ds.episodes) {
        Entry e;
        auto sp = ds.split.find(ep.id);
        if (sp == ds.split.end()) throw ValidationError("episode missing from split: " + ep.id);
        e.test = sp->second == Split::test;
        e.mort = ep.labels.mort;
        e.los = ep.labels.los;
        if (ep.labels.dd) {
            auto it = std::find(classes.begin(), classes.end(), *ep.labels.dd);
            if (it == classes.end())
                throw ValidationError("unknown discharge class: " + *ep.labels.dd);
            e.dd = static_cast<int>(it - classes.begin());
        }
        entries_[ep.id] = std::move(e);
    }
}

const LabelStore::Entry& LabelStore::entry(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw ValidationError("unknown episode id: " + id);
    if (it->second.test) {
        if (eval_depth_ == 0)
            throw TestLabelAccess("test label for " + id + " read outside the evaluation phase");
        ++test_reads_;
    }
    return it->second;
}

bool LabelStore::is_test(const std::string& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw ValidationError("unknown episode id: " + id);
    return it->second.test;
}

int LabelStore::mort(const std::string& id) const {
    const Entry& e = entry(id);
    if (!e.mort) throw ValidationError("episode " + id + " has no mortality label");
    return *e.mort;
}

double LabelStore::los(const std::string& id) const {
    const Entry& e = entry(id);
    if (!e.los) throw ValidationError("episode " + id + " has no length-of-stay label");
    return *e.los;
}

int LabelStore::dd_class(const std::string& id) const {
    const Entry& e = entry(id);
    if (!e.dd) throw ValidationError("episode " + id + " has no discharge label");
    return *e.dd;
}

namespace {

Task task_from_json(const std::string& s) { return parse_task(s); }

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw InvalidConfig("unknown config key '" + it.key() + "' in " + where);
}

}  // namespace

ExperimentPlan plan_from_json_file(const std::string& path) {
    ExperimentPlan plan;
    if (path.empty()) return plan;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("config file: ") + e.what());
    }
    check_keys(j,
               {"tasks", "representations", "sizes", "repeats", "modality_sets", "seed", "train",
                "skipgram", "graph_threshold", "external_vectors", "grid_file", "cv_folds",
                "threads", "resume"},
               "plan");
    if (j.contains("tasks")) {
        plan.tasks.clear();
        for (const auto& t : j["tasks"]) plan.tasks.push_back(task_from_json(t.get<std::string>()));
    }
    if (j.contains("representations")) {
        plan.representations.clear();
        for (const auto& r : j["representations"])
            plan.representations.push_back(parse_repr_flavor(r.get<std::string>()));
    }
    if (j.contains("sizes")) {
        plan.sizes.clear();
        plan.include_full_size = false;
        for (const auto& s : j["sizes"]) {
            if (s.is_string()) {
                if (s.get<std::string>() != "all")
                    throw InvalidConfig("sizes: only the string \"all\" is recognized");
                plan.include_full_size = true;
            } else {
                plan.sizes.push_back(s.get<std::size_t>());
            }
        }
    }
    if (j.contains("repeats")) plan.repeats = j["repeats"].get<std::size_t>();
    if (j.contains("modality_sets")) {
        plan.modality_sets.clear();
        for (const auto& m : j["modality_sets"])
            plan.modality_sets.push_back(m.get<std::string>());
    }
    if (j.contains("seed")) plan.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("train")) {
        const auto& t = j["train"];
        check_keys(t,
                   {"iterations", "batch_size", "dim", "margin", "learning_rate", "beta1", "beta2",
                    "adam_epsilon", "init_scale", "distance_epsilon", "self_loops"},
                   "train");
        if (t.contains("iterations")) plan.train.iterations = t["iterations"].get<std::size_t>();
        if (t.contains("batch_size")) plan.train.batch_size = t["batch_size"].get<std::size_t>();
        if (t.contains("dim")) plan.train.dim = t["dim"].get<std::size_t>();
        if (t.contains("margin")) plan.train.margin = t["margin"].get<double>();
        if (t.contains("learning_rate")) plan.train.learning_rate = t["learning_rate"].get<double>();
        if (t.contains("beta1")) plan.train.beta1 = t["beta1"].get<double>();
        if (t.contains("beta2")) plan.train.beta2 = t["beta2"].get<double>();
        if (t.contains("adam_epsilon")) plan.train.adam_epsilon = t["adam_epsilon"].get<double>();
        if (t.contains("init_scale")) plan.train.init_scale = t["init_scale"].get<double>();
        if (t.contains("distance_epsilon"))
            plan.train.distance_epsilon = t["distance_epsilon"].get<double>();
        if (t.contains("self_loops")) plan.train.self_loops = t["self_loops"].get<bool>();
    }
    if (j.contains("skipgram")) {
        const auto& s = j["skipgram"];
        check_keys(s, {"dim", "window", "negatives", "epochs", "min_count", "learning_rate"},
                   "skipgram");
        if (s.contains("dim")) plan.skipgram.dim = s["dim"].get<std::size_t>();
        if (s.contains("window")) plan.skipgram.window = s["window"].get<std::size_t>();
        if (s.contains("negatives")) plan.skipgram.negatives = s["negatives"].get<std::size_t>();
        if (s.contains("epochs")) plan.skipgram.epochs = s["epochs"].get<std::size_t>();
        if (s.contains("min_count")) plan.skipgram.min_count = s["min_count"].get<std::size_t>();
        if (s.contains("learning_rate"))
            plan.skipgram.learning_rate = s["learning_rate"].get<double>();
    }
    if (j.contains("graph_threshold")) plan.graph_threshold = j["graph_threshold"].get<double>();
    if (j.contains("external_vectors"))
        plan.external_vectors = j["external_vectors"].get<std::string>();
    if (j.contains("grid_file")) plan.grid_file = j["grid_file"].get<std::string>();
    if (j.contains("cv_folds")) plan.cv_folds = j["cv_folds"].get<std::size_t>();
    if (j.contains("threads")) plan.threads = j["threads"].get<std::size_t>();
    if (j.contains("resume")) plan.resume = j["resume"].get<bool>();
    return plan;
}

std::vector<std::string> raw_type_ids(const FeaturizedDataset& fd,
                                      const std::string& modality_set) {
    if (modality_set == "timeseries_only") return {"timeseries"};
    if (modality_set == "all") {
        std::vector<std::string> out;
        for (const auto& t : fd.types) out.push_back(t.type_id);
        return out;
    }
    throw InvalidConfig("unknown modality set: " + modality_set);
}

std::vector<std::string> ep_type_ids(const FeaturizedDataset& fd,
                                     const std::string& modality_set) {
    if (modality_set == "timeseries_only") return {"timeseries"};
    if (modality_set == "all") {
        // admission text builds the graph; it is not an encoder type
        std::vector<std::string> out;
        for (const auto& t : fd.types)
            if (t.type_id != "admission") out.push_back(t.type_id);
        return out;
    }
    throw InvalidConfig("unknown modality set: " + modality_set);
}

bool ep_uses_identity(const std::string& modality_set) { return modality_set == "all"; }

GraphArtifacts build_graph_artifacts(const Dataset& ds, const SkipgramConfig& config,
                                     double threshold, const std::string& external_vectors) {
    GraphArtifacts ga;
    ga.docs = admission_documents(ds);
    if (external_vectors.empty())
        ga.word_vectors = train_skipgram(ga.docs, config);
    else
        ga.word_vectors = load_word_vectors(external_vectors);
    ga.sentence_vectors.reserve(ga.docs.size());
    for (const auto& doc : ga.docs)
        ga.sentence_vectors.push_back(sentence_vector(doc, ga.word_vectors));
    std::vector<std::string> ids;
    ids.reserve(ds.episodes.size());
    for (const auto& ep : ds.episodes) ids.push_back(ep.id);
    ga.graph = build_graph(ids, ga.sentence_vectors, threshold);
    return ga;
}

namespace {

Eigen::MatrixXd gather_rows(const RepresentationMatrix& rm, const std::vector<std::string>& ids) {
    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < rm.episode_ids.size(); ++i) row_of[rm.episode_ids[i]] = i;
    Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), rm.X.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = row_of.find(ids[i]);
        if (it == row_of.end()) throw IdMisalignment("no representation row for " + ids[i]);
        out.row(static_cast<Eigen::Index>(i)) = rm.X.row(static_cast<Eigen::Index>(it->second));
    }
    return out;
}

}  // namespace

double evaluate_cell(const RepresentationMatrix& rm, LabelStore& labels, Task task,
                     const std::vector<std::string>& subset_ids,
                     const std::vector<std::string>& test_ids, const LogisticGrid& lgrid,
                     const RidgeGrid& rgrid, std::size_t cv_folds, std::uint64_t cv_seed) {
    const TaskSpec spec = task_spec(task);
    Eigen::MatrixXd Xtr = gather_rows(rm, subset_ids);
    Eigen::MatrixXd Xte = gather_rows(rm, test_ids);

    if (spec.kind == TaskKind::regression) {
        Eigen::VectorXd ytr(static_cast<Eigen::Index>(subset_ids.size()));
        for (std::size_t i = 0; i < subset_ids.size(); ++i)
            ytr[static_cast<Eigen::Index>(i)] = labels.los(subset_ids[i]);
        auto cv = cv_select_ridge(Xtr, ytr, rgrid, cv_folds, cv_seed);
        RidgeModel model = fit_ridge(Xtr, ytr, cv.best_lambda, true);
        Eigen::VectorXd pred = predict(model, Xte);
        auto scope = labels.evaluation_scope();
        std::vector<double> yte(test_ids.size()), pv(test_ids.size());
        for (std::size_t i = 0; i < test_ids.size(); ++i) {
            yte[i] = labels.los(test_ids[i]);
            pv[i] = pred[static_cast<Eigen::Index>(i)];
        }
        return mae(pv, yte);
    }

    std::vector<int> ytr(subset_ids.size());
    for (std::size_t i = 0; i < subset_ids.size(); ++i)
        ytr[i] = spec.kind == TaskKind::binary ? labels.mort(subset_ids[i])
                                               : labels.dd_class(subset_ids[i]);
    const std::size_t n_classes = static_cast<std::size_t>(spec.num_classes);
    auto cv = cv_select_logistic(Xtr, ytr, n_classes, spec.kind, lgrid, cv_folds, cv_seed);
    LogisticModel model = fit_logistic(Xtr, ytr, n_classes, cv.best);
    Eigen::MatrixXd proba = predict_proba(model, Xte);

    auto scope = labels.evaluation_scope();
    if (spec.kind == TaskKind::binary) {
        std::vector<double> scores(test_ids.size());
        std::vector<int> yte(test_ids.size());
        for (std::size_t i = 0; i < test_ids.size(); ++i) {
            scores[i] = proba(static_cast<Eigen::Index>(i), 1);
            yte[i] = labels.mort(test_ids[i]);
        }
        return auroc(scores, yte);
    }
    std::vector<std::vector<double>> sm(test_ids.size(), std::vector<double>(n_classes));
    std::vector<int> yte(test_ids.size());
    for (std::size_t i = 0; i < test_ids.size(); ++i) {
        for (std::size_t c = 0; c < n_classes; ++c)
            sm[i][c] = proba(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        yte[i] = labels.dd_class(test_ids[i]);
    }
    return mc_auroc(sm, yte);
}

namespace {

bool load_checkpoint(const std::string& path, double* value) {
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return false;
    }
    if (!j.contains("value")) return false;
    *value = j["value"].get<double>();
    return true;
}

void write_checkpoint(const std::string& path, const CellResult& cell) {
    nlohmann::json j;
    j["task"] = task_name(cell.task);
    j["modality_set"] = cell.modality;
    j["representation"] = repr_flavor_name(cell.repr);
    j["size"] = cell.size;
    j["full_train"] = cell.full_train;
    j["repeat"] = cell.repeat;
    j["value"] = cell.value;
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

std::string checkpoint_name(const CellResult& cell) {
    std::ostringstream os;
    os << task_name(cell.task) << '_' << cell.modality << '_' << repr_flavor_name(cell.repr) << '_'
       << cell.size << (cell.full_train ? "_full" : "") << '_' << cell.repeat << ".json";
    return os.str();
}

std::string metric_label(Task t) {
    switch (t) {
        case Task::mort: return "AuROC, higher is better";
        case Task::dd: return "mc-AuROC, higher is better";
        case Task::los: return "MAE in days, lower is better";
    }
    return "";
}

struct CellKey {
    Task task;
    std::string modality;
    std::size_t size;
    bool full_train;

    bool operator<(const CellKey& o) const {
        if (task != o.task) return static_cast<int>(task) < static_cast<int>(o.task);
        if (modality != o.modality) return modality < o.modality;
        if (full_train != o.full_train) return full_train < o.full_train;
        return size < o.size;
    }
    bool operator==(const CellKey& o) const {
        return task == o.task && modality == o.modality && size == o.size &&
               full_train == o.full_train;
    }
};

}  // namespace

ExperimentReport run_experiment(const ExperimentPlan& plan, const Dataset& ds,
                                const std::string& out_dir) {
    if (plan.repeats < 1) throw InvalidConfig("plan: repeats must be >= 1");
    if (plan.tasks.empty()) throw InvalidConfig("plan: no tasks");
    if (plan.representations.empty()) throw InvalidConfig("plan: no representations");
    if (plan.modality_sets.empty()) throw InvalidConfig("plan: no modality sets");
    if (plan.cv_folds < 2) throw InvalidConfig("plan: cv_folds must be >= 2");

    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/checkpoints");

    const auto train_ids = ds.ids_in_split(Split::train);
    const auto test_ids = ds.ids_in_split(Split::test);
    if (train_ids.empty() || test_ids.empty())
        throw ValidationError("dataset must contain both train and test episodes");

    FeaturizedDataset fd = featurize_dataset(ds);
    SkipgramConfig sg = plan.skipgram;
    sg.seed = rng::derive_seed(plan.seed, {0x5697u});
    GraphArtifacts ga =
        build_graph_artifacts(ds, sg, plan.graph_threshold, plan.external_vectors);
    save_word_vectors(ga.word_vectors, out_dir + "/vectors.txt");
    save_graph(ga.graph, out_dir + "/graph.edges");

    LabelStore labels(ds);
    LogisticGrid lgrid;
    RidgeGrid rgrid;
    load_grids(plan.grid_file, lgrid, rgrid);

    ExperimentReport report;
    report.meta.seed = plan.seed;
    report.meta.n_episodes = ds.episodes.size();
    report.meta.train_size = train_ids.size();
    report.meta.test_size = test_ids.size();
    report.meta.graph_edges = ga.graph.num_edges();
    report.meta.isolated_nodes = ga.graph.num_isolated();

    std::vector<std::size_t> sizes = plan.sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    std::vector<std::pair<std::size_t, bool>> size_entries;
    for (std::size_t s : sizes)
        if (s < train_ids.size() && s > 0) size_entries.emplace_back(s, false);
    if (plan.include_full_size) size_entries.emplace_back(train_ids.size(), true);
    if (size_entries.empty()) throw InvalidConfig("plan: no usable subset sizes");

    for (std::size_t ms_idx = 0; ms_idx < plan.modality_sets.size(); ++ms_idx) {
        const std::string& ms = plan.modality_sets[ms_idx];
        EncoderInputs inputs = build_encoder_inputs(fd, ep_type_ids(fd, ms), ep_uses_identity(ms));
        TrainConfig tc = plan.train;
        tc.seed = rng::derive_seed(plan.seed, {0xE9u, ms_idx});
        std::cerr << "[bench] training embeddings, modality set '" << ms << "' ("
                  << inputs.types.size() << " types, " << inputs.episode_ids.size()
                  << " nodes)\n";
        TrainResult trained = train_encoders(inputs, ga.graph, tc);
        save_params(trained.params, out_dir + "/params_" + ms + ".bin");
        for (const auto& tp : trained.params.types) {
            const TypeInputs* ti = inputs.find(tp.type_id);
            save_embeddings_csv(inputs.episode_ids, encode_all(*ti, tp),
                                out_dir + "/embeddings_" + ms + "_" + tp.type_id + ".csv");
        }

        RepresentationMatrix raw = raw_repr(fd, raw_type_ids(fd, ms));
        RepresentationMatrix embedded = embedded_repr(trained.params, inputs);
        RepresentationMatrix combined = combined_repr(embedded, raw);
        auto rm_for = [&](ReprFlavor f) -> const RepresentationMatrix& {
            switch (f) {
                case ReprFlavor::raw: return raw;
                case ReprFlavor::embedded: return embedded;
                case ReprFlavor::combined: return combined;
            }
            return raw;
        };

        for (std::size_t t_idx = 0; t_idx < plan.tasks.size(); ++t_idx) {
            Task task = plan.tasks[t_idx];
            for (auto [size, full] : size_entries) {
                const std::size_t reps = full ? 1 : plan.repeats;
                for (std::size_t rep = 0; rep < reps; ++rep) {
                    std::vector<std::string> subset =
                        full ? train_ids
                             : sample_labeled_subset(
                                   ds, size,
                                   rng::derive_seed(plan.seed, {1, t_idx, ms_idx, size, rep}));
                    std::uint64_t cv_seed =
                        rng::derive_seed(plan.seed, {2, t_idx, ms_idx, size, rep});
                    for (ReprFlavor repr : plan.representations) {
                        CellResult cell;
                        cell.task = task;
                        cell.modality = ms;
                        cell.repr = repr;
                        cell.size = size;
                        cell.full_train = full;
                        cell.repeat = rep;
                        std::string cp = out_dir + "/checkpoints/" + checkpoint_name(cell);
                        if (!(plan.resume && load_checkpoint(cp, &cell.value))) {
                            cell.value = evaluate_cell(rm_for(repr), labels, task, subset,
                                                       test_ids, lgrid, rgrid, plan.cv_folds,
                                                       cv_seed);
                            write_checkpoint(cp, cell);
                        }
                        report.cells.push_back(cell);
                    }
                }
                std::cerr << "[bench] " << ms << "/" << task_name(task) << " size " << size
                          << (full ? " (all)" : "") << " done\n";
            }
        }
    }

    report.comparisons = compute_comparisons(report.cells);
    write_results_csv(report.cells, report.meta, out_dir + "/results.csv");
    write_significance_csv(report.comparisons, out_dir + "/significance.csv");
    write_report_md(report.cells, report.comparisons, report.meta, out_dir + "/report.md");
    return report;
}

std::vector<ComparisonResult> compute_comparisons(const std::vector<CellResult>& cells,
                                                  double alpha) {
    std::vector<CellKey> keys;
    std::map<CellKey, std::map<ReprFlavor, std::map<std::size_t, double>>> grouped;
    for (const auto& c : cells) {
        CellKey key{c.task, c.modality, c.size, c.full_train};
        if (!grouped.count(key)) keys.push_back(key);
        grouped[key][c.repr][c.repeat] = c.value;
    }
    std::sort(keys.begin(), keys.end());

    const std::vector<std::pair<ReprFlavor, ReprFlavor>> pairs = {
        {ReprFlavor::embedded, ReprFlavor::raw},
        {ReprFlavor::combined, ReprFlavor::raw},
        {ReprFlavor::combined, ReprFlavor::embedded},
    };

    std::vector<ComparisonResult> comps;
    for (const auto& key : keys) {
        const auto& by_repr = grouped[key];
        for (auto [a, b] : pairs) {
            auto ia = by_repr.find(a);
            auto ib = by_repr.find(b);
            if (ia == by_repr.end() || ib == by_repr.end()) continue;
            if (ia->second.size() != ib->second.size() || ia->second.size() < 2) continue;
            std::vector<double> va, vb;
            bool aligned = true;
            for (const auto& [rep, val] : ia->second) {
                auto jt = ib->second.find(rep);
                if (jt == ib->second.end()) {
                    aligned = false;
                    break;
                }
                va.push_back(val);
                vb.push_back(jt->second);
            }
            if (!aligned) continue;
            auto t = stats::paired_t_test(va, vb);
            ComparisonResult cr;
            cr.task = key.task;
            cr.modality = key.modality;
            cr.size = key.size;
            cr.full_train = key.full_train;
            cr.a = a;
            cr.b = b;
            cr.n = t.n;
            double suma = 0.0, sumb = 0.0;
            for (double x : va) suma += x;
            for (double x : vb) sumb += x;
            cr.mean_a = suma / static_cast<double>(va.size());
            cr.mean_b = sumb / static_cast<double>(vb.size());
            cr.t = t.t;
            cr.p = t.p;
            comps.push_back(cr);
        }
    }

    std::vector<double> ps;
    for (const auto& c : comps) ps.push_back(c.p);
    if (!ps.empty()) {
        auto adj = stats::benjamini_hochberg(ps);
        for (std::size_t i = 0; i < comps.size(); ++i) {
            comps[i].p_adjusted = adj[i];
            comps[i].significant = adj[i] < alpha;
        }
    }
    return comps;
}

void write_results_csv(const std::vector<CellResult>& cells, const ReportMeta& meta,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# epmd bench results\n";
    out << "# seed=" << meta.seed << '\n';
    out << "# n_episodes=" << meta.n_episodes << '\n';
    out << "# train_size=" << meta.train_size << '\n';
    out << "# test_size=" << meta.test_size << '\n';
    out << "# graph_edges=" << meta.graph_edges << '\n';
    out << "# isolated_nodes=" << meta.isolated_nodes << '\n';
    out << "task,modality_set,representation,size,full_train,repeat,value\n";
    char buf[64];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.value);
        out << task_name(c.task) << ',' << c.modality << ',' << repr_flavor_name(c.repr) << ','
            << c.size << ',' << (c.full_train ? 1 : 0) << ',' << c.repeat << ',' << buf << '\n';
    }
}

std::vector<CellResult> load_results_csv(const std::string& path, ReportMeta* meta) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open results file: " + path);
    std::vector<CellResult> cells;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (meta) {
                auto eq = line.find('=');
                if (eq != std::string::npos) {
                    std::string key = line.substr(2, eq - 2);
                    std::string val = line.substr(eq + 1);
                    if (key == "seed") meta->seed = std::stoull(val);
                    if (key == "n_episodes") meta->n_episodes = std::stoul(val);
                    if (key == "train_size") meta->train_size = std::stoul(val);
                    if (key == "test_size") meta->test_size = std::stoul(val);
                    if (key == "graph_edges") meta->graph_edges = std::stoul(val);
                    if (key == "isolated_nodes") meta->isolated_nodes = std::stoul(val);
                }
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line != "task,modality_set,representation,size,full_train,repeat,value")
                throw MalformedRecord("results file: unexpected header");
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw MalformedRecord("results line " + std::to_string(lineno) + ": want 7 fields");
        CellResult c;
        c.task = parse_task(fields[0]);
        c.modality = fields[1];
        c.repr = parse_repr_flavor(fields[2]);
        c.size = std::stoul(fields[3]);
        c.full_train = fields[4] == "1";
        c.repeat = std::stoul(fields[5]);
        c.value = std::stod(fields[6]);
        cells.push_back(c);
    }
    if (!header_seen) throw MalformedRecord("results file: missing header");
    return cells;
}

void write_significance_csv(const std::vector<ComparisonResult>& comps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# paired t-tests, Benjamini-Hochberg adjusted across this whole family\n";
    out << "task,modality_set,size,full_train,a,b,n,mean_a,mean_b,t,p,p_adjusted,significant\n";
    char buf[256];
    for (const auto& c : comps) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g", c.mean_a, c.mean_b, c.t,
                      c.p, c.p_adjusted);
        out << task_name(c.task) << ',' << c.modality << ',' << c.size << ','
            << (c.full_train ? 1 : 0) << ',' << repr_flavor_name(c.a) << ','
            << repr_flavor_name(c.b) << ',' << c.n << ',' << buf << ','
            << (c.significant ? 1 : 0) << '\n';
    }
}

void write_report_md(const std::vector<CellResult>& cells,
                     const std::vector<ComparisonResult>& comps, const ReportMeta& meta,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ExecutionError("cannot open for writing: " + path);
    out << "# EP-md benchmark report\n\n";
    out << "- seed: " << meta.seed << '\n';
    out << "- episodes: " << meta.n_episodes << " (train " << meta.train_size << ", test "
        << meta.test_size << ")\n";
    out << "- affinity graph: " << meta.graph_edges << " edges, " << meta.isolated_nodes
        << " isolated nodes\n";
    out << "- setting: transductive — the affinity graph and type embeddings are built from all "
           "episodes (train and test) without labels; labels are used only by the downstream "
           "fits.\n";

    // preserve first-appearance order of tasks/modalities/representations
    std::vector<std::pair<Task, std::string>> sections;
    std::vector<ReprFlavor> reprs;
    for (const auto& c : cells) {
        std::pair<Task, std::string> sec{c.task, c.modality};
        if (std::find(sections.begin(), sections.end(), sec) == sections.end())
            sections.push_back(sec);
        if (std::find(reprs.begin(), reprs.end(), c.repr) == reprs.end()) reprs.push_back(c.repr);
    }

    char buf[128];
    for (const auto& [task, ms] : sections) {
        out << "\n## " << task_name(task) << " (" << metric_label(task)
            << ") — modality set: " << ms << "\n\n";
        if (task == Task::mort) {
            std::snprintf(buf, sizeof(buf), "%.3f", kLstmMortReference);
            out << "Reference: prior-work single-task LSTM mort AuROC " << buf
                << " (real-data benchmark, horizontal-line datum).\n\n";
        }

        std::vector<std::pair<std::size_t, bool>> rows;
        for (const auto& c : cells) {
            if (c.task != task || c.modality != ms) continue;
            std::pair<std::size_t, bool> row{c.size, c.full_train};
            if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
        }
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return !a.second;
            return a.first < b.first;
        });

        out << "| train size |";
        for (ReprFlavor r : reprs) out << ' ' << repr_flavor_name(r) << " |";
        out << "\n|---:|";
        for (std::size_t i = 0; i < reprs.size(); ++i) out << "---|";
        out << '\n';
        for (const auto& [size, full] : rows) {
            if (full)
                out << "| " << size << " (all) |";
            else
                out << "| " << size << " |";
            for (ReprFlavor r : reprs) {
                std::vector<double> vals;
                for (const auto& c : cells)
                    if (c.task == task && c.modality == ms && c.size == size &&
                        c.full_train == full && c.repr == r)
                        vals.push_back(c.value);
                if (vals.empty()) {
                    out << " - |";
                    continue;
                }
                double mean = 0.0;
                for (double v : vals) mean += v;
                mean /= static_cast<double>(vals.size());
                double var = 0.0;
                for (double v : vals) var += (v - mean) * (v - mean);
                double sd = std::sqrt(var / static_cast<double>(vals.size()));
                std::snprintf(buf, sizeof(buf), " %.3f ± %.3f |", mean, sd);
                out << buf;
            }
            out << '\n';
        }

        bool any = false;
        for (const auto& c : comps) {
            if (c.task != task || c.modality != ms) continue;
            if (!any) {
                out << "\nPaired comparisons (two-sided t-test, BH-adjusted):\n\n";
                any = true;
            }
            std::snprintf(buf, sizeof(buf), "%+0.4f (p_adj=%.4g)", c.mean_a - c.mean_b,
                          c.p_adjusted);
            out << "- size " << c.size << (c.full_train ? " (all)" : "") << ": "
                << repr_flavor_name(c.a) << " - " << repr_flavor_name(c.b) << " = " << buf
                << (c.significant ? " significant" : "") << '\n';
        }
    }
}

}  // namespace epmd
