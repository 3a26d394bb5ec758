#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relstance/relstance.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace relstance;

namespace {

// post-parse validation problems (missing inputs for a system, bad
// combinations) exit with the usage code
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

struct ManifestBuilder {
    std::string subcommand;
    json config = json::object();
    json inputs = json::array();
    json outputs = json::array();
    std::uint64_t seed = 0;

    void add_input(const fs::path& path) {
        inputs.push_back(
            {{"path", path.string()}, {"fnv1a64", fnv1a64_hex(read_file(path))}});
    }

    // output paths are recorded as basenames so reruns into different
    // directories stay byte-identical
    void add_output(const fs::path& path) { outputs.push_back(path.filename().string()); }

    void write(const fs::path& manifest_path) const {
        json m = {{"subcommand", subcommand}, {"config", config},
                  {"inputs", inputs},         {"outputs", outputs},
                  {"seed", seed},             {"tool_version", RELSTANCE_VERSION}};
        write_text_atomic(manifest_path, m.dump(2) + "\n");
    }
};

struct EdgeArg {
    fs::path path;
    InteractionKind default_kind = InteractionKind::Retweet;
};

EdgeArg parse_edge_arg(const std::string& arg) {
    EdgeArg e;
    if (arg.size() > 8 && arg.rfind(":retweet") == arg.size() - 8) {
        e.path = arg.substr(0, arg.size() - 8);
        e.default_kind = InteractionKind::Retweet;
    } else if (arg.size() > 7 && arg.rfind(":friend") == arg.size() - 7) {
        e.path = arg.substr(0, arg.size() - 7);
        e.default_kind = InteractionKind::Friend;
    } else {
        e.path = arg;
    }
    return e;
}

// Parses every edge file and partitions pairs by their (possibly per-line
// overridden) kind.
void load_edges(const std::vector<std::string>& edge_args, InteractionSet& retweets,
                InteractionSet& friends, ManifestBuilder& manifest) {
    for (const auto& arg : edge_args) {
        EdgeArg e = parse_edge_arg(arg);
        std::ifstream in(e.path);
        if (!in) throw std::runtime_error("cannot open " + e.path.string());
        InteractionSet set = parse_edges(in, e.default_kind);
        for (const auto& p : set.pairs()) {
            if (p.kind == InteractionKind::Retweet) retweets.add(p);
            else friends.add(p);
        }
        manifest.add_input(e.path);
    }
}

CorpusMode corpus_mode_from_string(const std::string& s) {
    if (s == "retweet") return CorpusMode::Retweet;
    if (s == "friends") return CorpusMode::Friends;
    if (s == "mixed") return CorpusMode::Mixed;
    throw UsageError("--mode must be retweet, friends or mixed");
}

TweetDataset load_tweets(const fs::path& path, ManifestBuilder& manifest) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    TweetDataset ds = parse_tweets(in);
    manifest.add_input(path);
    return ds;
}

RelationalEmbedding load_embedding(const fs::path& path, ManifestBuilder& manifest) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    RelationalEmbedding emb = read_embedding(in);
    manifest.add_input(path);
    return emb;
}

json train_config_to_json(const TrainConfig& cfg) {
    return {{"dim", cfg.dim},
            {"epochs", cfg.epochs},
            {"initial_lr", cfg.initial_lr},
            {"min_lr", cfg.min_lr},
            {"negatives_k", cfg.negatives_k},
            {"subsample_t", cfg.subsample_t},
            {"subsample_unit",
             cfg.subsample_unit == SubsampleUnit::Target ? "target" : "pair"},
            {"ns_power", cfg.ns_power},
            {"seed", cfg.seed},
            {"threads", cfg.threads}};
}

void train_config_from_json(const json& j, TrainConfig& cfg) {
    if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
    if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
    if (j.contains("initial_lr")) cfg.initial_lr = j["initial_lr"].get<double>();
    if (j.contains("min_lr")) cfg.min_lr = j["min_lr"].get<double>();
    if (j.contains("negatives_k")) cfg.negatives_k = j["negatives_k"].get<int>();
    if (j.contains("subsample_t")) cfg.subsample_t = j["subsample_t"].get<double>();
    if (j.contains("subsample_unit")) {
        std::string u = j["subsample_unit"].get<std::string>();
        if (u == "target") cfg.subsample_unit = SubsampleUnit::Target;
        else if (u == "pair") cfg.subsample_unit = SubsampleUnit::Pair;
        else throw std::runtime_error("config: subsample_unit must be target or pair");
    }
    if (j.contains("ns_power")) cfg.ns_power = j["ns_power"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
}

// ---------------------------------------------------------------- train-emb

struct TrainEmbArgs {
    std::vector<std::string> edges;
    std::string mode = "mixed";
    std::string out;
    std::string config_file;
    std::string subsample_unit;
    int dim = 0, epochs = 0, neg = 0, threads = 0;
    double lr = 0, min_lr = -1, subsample = -1, alpha = -1;
    std::uint64_t seed = 0;
    CLI::App* cmd = nullptr;
};

int run_train_emb(const TrainEmbArgs& a) {
    TrainConfig cfg;
    ManifestBuilder manifest;
    manifest.subcommand = "train-emb";
    if (!a.config_file.empty()) {
        json j = json::parse(read_file(a.config_file));
        train_config_from_json(j, cfg);
        manifest.add_input(a.config_file);
    }
    // explicit flags override the config file
    if (a.cmd->count("--dim")) cfg.dim = a.dim;
    if (a.cmd->count("--epochs")) cfg.epochs = a.epochs;
    if (a.cmd->count("--neg")) cfg.negatives_k = a.neg;
    if (a.cmd->count("--lr")) cfg.initial_lr = a.lr;
    if (a.cmd->count("--min-lr")) cfg.min_lr = a.min_lr;
    if (a.cmd->count("--subsample")) cfg.subsample_t = a.subsample;
    if (a.cmd->count("--alpha")) cfg.ns_power = a.alpha;
    if (a.cmd->count("--seed")) cfg.seed = a.seed;
    if (a.cmd->count("--threads")) cfg.threads = a.threads;
    if (a.cmd->count("--subsample-unit")) {
        if (a.subsample_unit == "target") cfg.subsample_unit = SubsampleUnit::Target;
        else if (a.subsample_unit == "pair") cfg.subsample_unit = SubsampleUnit::Pair;
        else throw UsageError("--subsample-unit must be target or pair");
    }
    cfg.validate();

    InteractionSet retweets, friends;
    load_edges(a.edges, retweets, friends, manifest);
    InteractionSet corpus =
        build_corpus(retweets, friends, corpus_mode_from_string(a.mode));

    RelationalEmbedding emb = train(corpus, cfg, &std::cerr);

    std::ostringstream out;
    write_embedding(emb, out);
    write_text_atomic(a.out, out.str());

    manifest.config = train_config_to_json(cfg);
    manifest.config["mode"] = a.mode;
    manifest.seed = cfg.seed;
    manifest.add_output(a.out);
    manifest.write(fs::path(a.out).string() + ".manifest.json");
    return 0;
}

// ----------------------------------------------------------------- pipeline

struct PipelineArgs {
    std::string system;
    std::string tweets;
    std::string emb;
    std::string wordvecs;
    std::string out_dir;
    std::string similarity = "cosine";
    double C = 1.0, gamma = 0.5;
    std::size_t max_features = 0;
};

int run_pipeline_cmd(const PipelineArgs& a) {
    PipelineConfig cfg;
    cfg.system = parse_system(a.system);
    cfg.C = a.C;
    cfg.gamma = a.gamma;
    cfg.similarity = similarity_from_string(a.similarity);
    if (a.max_features > 0) cfg.max_features = a.max_features;

    if (needs_embedding(cfg.system) && a.emb.empty())
        throw UsageError("--system " + a.system + " requires --emb");
    if (needs_word_vectors(cfg.system) && a.wordvecs.empty())
        throw UsageError("--system " + a.system + " requires --wordvecs");

    ManifestBuilder manifest;
    manifest.subcommand = "pipeline";
    TweetDataset data = load_tweets(a.tweets, manifest);

    std::optional<RelationalEmbedding> emb;
    if (!a.emb.empty()) emb = load_embedding(a.emb, manifest);

    std::shared_ptr<const WordVectorTable> wordvecs;
    if (!a.wordvecs.empty()) {
        std::ifstream in(a.wordvecs);
        if (!in) throw std::runtime_error("cannot open " + a.wordvecs);
        wordvecs = std::make_shared<WordVectorTable>(load_word_vectors(in));
        manifest.add_input(a.wordvecs);
    }

    PipelineResult result =
        run_pipeline(data, emb ? &*emb : nullptr, wordvecs, cfg);

    fs::create_directories(a.out_dir);
    fs::path dir(a.out_dir);
    {
        std::ostringstream s;
        write_predictions_tsv(result, s);
        write_text_atomic(dir / "predictions.tsv", s.str());
    }
    write_text_atomic(dir / "report.json", report_to_json(result.report).dump(2) + "\n");
    write_text_atomic(dir / "report.txt", report_to_text(result.report));
    {
        std::ostringstream s;
        result.confusion.write_tsv(s);
        write_text_atomic(dir / "confusion.tsv", s.str());
    }
    write_text_atomic(dir / "models.json", result.models.dump(2) + "\n");

    manifest.config = {{"system", a.system},
                       {"C", cfg.C},
                       {"gamma", cfg.gamma},
                       {"similarity", a.similarity},
                       {"max_features", a.max_features}};
    for (const char* f :
         {"predictions.tsv", "report.json", "report.txt", "confusion.tsv",
          "models.json"})
        manifest.add_output(f);
    manifest.write(dir / "manifest.json");

    std::cout << report_to_text(result.report);
    return 0;
}

// ----------------------------------------------------------------------- cv

struct CvArgs {
    std::string tweets;
    std::vector<std::string> edges;
    std::string system = "relemb-svm";
    std::vector<std::string> grid;
    std::string wordvecs;
    std::string out_dir;
    std::string split_mode = "tweet";
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    int epochs = 0, neg = 0;
    double lr = 0, subsample = -1;
    CLI::App* cmd = nullptr;
};

GridSpec parse_grid_tokens(const std::vector<std::string>& tokens) {
    GridSpec g;
    for (const auto& tok : tokens) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw UsageError("--grid tokens must look like key=v1,v2 (got '" + tok +
                             "')");
        std::string key = tok.substr(0, eq);
        std::vector<std::string> vals;
        std::istringstream vs(tok.substr(eq + 1));
        std::string v;
        while (std::getline(vs, v, ',')) vals.push_back(v);
        if (vals.empty()) throw UsageError("--grid " + key + " has no values");
        try {
            if (key == "dims") {
                g.dims.clear();
                for (const auto& x : vals) g.dims.push_back(std::stoi(x));
            } else if (key == "C") {
                g.C_values.clear();
                for (const auto& x : vals) g.C_values.push_back(std::stod(x));
            } else if (key == "gamma") {
                g.gamma_values.clear();
                for (const auto& x : vals) g.gamma_values.push_back(std::stod(x));
            } else {
                throw UsageError("--grid keys are dims, C, gamma (got '" + key + "')");
            }
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception&) {
            throw UsageError("--grid " + key + ": could not parse '" + tok + "'");
        }
    }
    return g;
}

int run_cv(const CvArgs& a) {
    GridSystem system = grid_system_from_string(a.system);
    GridSpec grid = parse_grid_tokens(a.grid);
    grid.folds = a.folds;
    grid.seed = a.seed;
    if (a.split_mode == "tweet") grid.fold_mode = KfoldMode::ByTweet;
    else if (a.split_mode == "user") grid.fold_mode = KfoldMode::ByUser;
    else throw UsageError("--split-mode must be tweet or user");

    if (system == GridSystem::RelembSvm && a.edges.empty())
        throw UsageError("--system relemb-svm requires --edges");
    if (system == GridSystem::FtembSvm && a.wordvecs.empty())
        throw UsageError("--system ftemb-svm requires --wordvecs");

    ManifestBuilder manifest;
    manifest.subcommand = "cv";
    TweetDataset data = load_tweets(a.tweets, manifest);
    InteractionSet retweets, friends;
    load_edges(a.edges, retweets, friends, manifest);

    std::shared_ptr<const WordVectorTable> wordvecs;
    if (!a.wordvecs.empty()) {
        std::ifstream in(a.wordvecs);
        if (!in) throw std::runtime_error("cannot open " + a.wordvecs);
        wordvecs = std::make_shared<WordVectorTable>(load_word_vectors(in));
        manifest.add_input(a.wordvecs);
    }

    TrainConfig emb_base;
    emb_base.seed = a.seed;
    if (a.cmd->count("--epochs")) emb_base.epochs = a.epochs;
    if (a.cmd->count("--neg")) emb_base.negatives_k = a.neg;
    if (a.cmd->count("--lr")) emb_base.initial_lr = a.lr;
    if (a.cmd->count("--subsample")) emb_base.subsample_t = a.subsample;

    GridSearchResult result =
        grid_search(data, retweets, friends, grid, system, emb_base, wordvecs);

    fs::create_directories(a.out_dir);
    fs::path dir(a.out_dir);
    json table = cv_table_to_json(result);
    write_text_atomic(dir / "cv_table.json", table.dump(2) + "\n");
    write_text_atomic(dir / "cv_table.txt", cv_table_to_text(result));
    write_text_atomic(dir / "best.json", table["best"].dump(2) + "\n");

    manifest.config = {{"system", a.system},
                       {"folds", grid.folds},
                       {"split_mode", a.split_mode},
                       {"dims", grid.dims},
                       {"C", grid.C_values},
                       {"gamma", grid.gamma_values},
                       {"emb", train_config_to_json(emb_base)}};
    manifest.seed = a.seed;
    for (const char* f : {"cv_table.json", "cv_table.txt", "best.json"})
        manifest.add_output(f);
    manifest.write(dir / "manifest.json");

    std::cout << cv_table_to_text(result);
    return 0;
}

// ---------------------------------------------------------------------- viz

struct VizArgs {
    std::string emb;
    std::string tweets;
    std::string out;
    std::string users = "train";
};

int run_viz(const VizArgs& a) {
    ManifestBuilder manifest;
    manifest.subcommand = "viz";
    RelationalEmbedding emb = load_embedding(a.emb, manifest);
    TweetDataset data = load_tweets(a.tweets, manifest);

    bool train_only = a.users == "train";
    if (!train_only && a.users != "all")
        throw UsageError("--users must be train or all");

    // one point per known author (first-seen stance)
    std::vector<std::string> users;
    std::vector<Stance> labels;
    std::vector<std::vector<double>> vectors;
    std::unordered_set<std::string> seen;
    for (const auto& r : data.records()) {
        if (train_only && r.split != Split::Train) continue;
        if (!emb.is_known(r.author)) continue;
        if (!seen.insert(r.author).second) continue;
        users.push_back(r.author);
        labels.push_back(r.stance);
        vectors.push_back(emb.lookup(r.author));
    }
    if (vectors.size() < 2)
        throw std::runtime_error("viz: fewer than 2 known authors to project");

    PcaModel pca = pca_fit(vectors, 2);
    auto projected = pca_transform(pca, vectors);

    {
        std::ostringstream s;
        emit_scatter(projected, labels, s);
        write_text_atomic(a.out, s.str());
    }
    fs::path coords = fs::path(a.out);
    coords.replace_extension(".tsv");
    {
        std::ostringstream s;
        write_projection_tsv(users, projected, labels, s);
        write_text_atomic(coords, s.str());
    }

    manifest.config = {{"users", a.users}};
    manifest.add_output(a.out);
    manifest.add_output(coords);
    manifest.write(fs::path(a.out).string() + ".manifest.json");
    return 0;
}

// -------------------------------------------------------------------- synth

struct SynthArgs {
    std::string preset;
    std::string out_dir;
    std::uint64_t seed = 1;
    double unknown_frac = -1;
    double text_noise = -1;
    CLI::App* cmd = nullptr;
};

int run_synth(const SynthArgs& a) {
    SynthConfig cfg = preset_config(preset_from_string(a.preset), a.seed);
    if (a.cmd->count("--unknown-frac")) cfg.unknown_user_fraction = a.unknown_frac;
    if (a.cmd->count("--text-noise")) cfg.text_noise = a.text_noise;

    SynthData data = generate(cfg);

    fs::create_directories(a.out_dir);
    fs::path dir(a.out_dir);
    {
        std::ostringstream s;
        serialize_edges(data.retweets, s);
        write_text_atomic(dir / "retweets.tsv", s.str());
    }
    {
        std::ostringstream s;
        serialize_edges(data.friends, s);
        write_text_atomic(dir / "friends.tsv", s.str());
    }
    {
        std::ostringstream s;
        serialize_tweets(data.tweets, s);
        write_text_atomic(dir / "tweets.tsv", s.str());
    }

    ManifestBuilder manifest;
    manifest.subcommand = "synth";
    manifest.seed = a.seed;
    manifest.config = {{"preset", a.preset},
                       {"n_users", cfg.n_users},
                       {"p_in", cfg.p_in},
                       {"p_out", cfg.p_out},
                       {"pairs_per_user", cfg.pairs_per_user},
                       {"tokens_per_tweet", cfg.tokens_per_tweet},
                       {"text_noise", cfg.text_noise},
                       {"unknown_user_fraction", cfg.unknown_user_fraction},
                       {"test_fraction", cfg.test_fraction}};
    for (const char* f : {"retweets.tsv", "friends.tsv", "tweets.tsv"})
        manifest.add_output(f);
    manifest.write(dir / "manifest.json");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stance detection with relational embeddings"};
    app.set_version_flag("--version", std::string("relstance ") + RELSTANCE_VERSION);
    app.require_subcommand(1);

    TrainEmbArgs te;
    CLI::App* train_emb = app.add_subcommand(
        "train-emb", "train relational embeddings from interaction pairs");
    te.cmd = train_emb;
    train_emb->add_option("--edges", te.edges,
                          "edge file, optionally path:retweet or path:friend")
        ->required();
    train_emb->add_option("--mode", te.mode, "retweet | friends | mixed");
    train_emb->add_option("--dim", te.dim, "embedding dimension");
    train_emb->add_option("--epochs", te.epochs, "training epochs");
    train_emb->add_option("--neg", te.neg, "negatives per pair");
    train_emb->add_option("--lr", te.lr, "initial learning rate");
    train_emb->add_option("--min-lr", te.min_lr, "final learning rate");
    train_emb->add_option("--subsample", te.subsample, "subsample threshold t");
    train_emb->add_option("--subsample-unit", te.subsample_unit, "target | pair");
    train_emb->add_option("--alpha", te.alpha, "negative-sampling exponent");
    train_emb->add_option("--seed", te.seed, "rng seed");
    train_emb->add_option("--threads", te.threads,
                          "worker threads (>1 waives determinism)");
    train_emb->add_option("--config", te.config_file,
                          "JSON config file (flags take precedence)");
    train_emb->add_option("--out", te.out, "output embedding file")->required();

    PipelineArgs pl;
    CLI::App* pipeline = app.add_subcommand(
        "pipeline", "fit a stance system on TRAIN and score the TEST split");
    pipeline
        ->add_option("--system", pl.system,
                     "relemb-svm | tfidf-svm | ftemb-svm | backoff:<textual> | "
                     "ensemble:<textual>")
        ->required();
    pipeline->add_option("--tweets", pl.tweets, "labeled tweet TSV")->required();
    pipeline->add_option("--emb", pl.emb, "embedding file");
    pipeline->add_option("--wordvecs", pl.wordvecs, "word-vector file");
    pipeline->add_option("--C", pl.C, "SVM C");
    pipeline->add_option("--gamma", pl.gamma, "RBF gamma");
    pipeline->add_option("--max-features", pl.max_features, "tf-idf feature cap");
    pipeline->add_option("--similarity", pl.similarity,
                         "cosine | negative-euclidean");
    pipeline->add_option("--out-dir", pl.out_dir, "output directory")->required();

    CvArgs cv;
    CLI::App* cv_cmd =
        app.add_subcommand("cv", "grid search with k-fold cross-validation");
    cv.cmd = cv_cmd;
    cv_cmd->add_option("--tweets", cv.tweets, "labeled tweet TSV")->required();
    cv_cmd->add_option("--edges", cv.edges, "edge files (as in train-emb)");
    cv_cmd->add_option("--system", cv.system, "relemb-svm | tfidf-svm | ftemb-svm");
    cv_cmd->add_option("--grid", cv.grid, "dims=10,20 C=1,10 gamma=0.1,1");
    cv_cmd->add_option("--folds", cv.folds, "number of folds");
    cv_cmd->add_option("--split-mode", cv.split_mode, "tweet | user");
    cv_cmd->add_option("--seed", cv.seed, "rng seed");
    cv_cmd->add_option("--epochs", cv.epochs, "embedding epochs");
    cv_cmd->add_option("--neg", cv.neg, "embedding negatives");
    cv_cmd->add_option("--lr", cv.lr, "embedding learning rate");
    cv_cmd->add_option("--subsample", cv.subsample, "embedding subsample t");
    cv_cmd->add_option("--wordvecs", cv.wordvecs, "word-vector file");
    cv_cmd->add_option("--out-dir", cv.out_dir, "output directory")->required();

    VizArgs vz;
    CLI::App* viz = app.add_subcommand(
        "viz", "PCA projection of user vectors to a stance-colored SVG");
    viz->add_option("--emb", vz.emb, "embedding file")->required();
    viz->add_option("--tweets", vz.tweets, "labeled tweet TSV")->required();
    viz->add_option("--out", vz.out, "output SVG path")->required();
    viz->add_option("--users", vz.users, "train | all");

    SynthArgs sy;
    CLI::App* synth = app.add_subcommand(
        "synth", "generate a seeded synthetic dataset");
    sy.cmd = synth;
    synth->add_option("--preset", sy.preset, "clean | overlap | transversal")
        ->required();
    synth->add_option("--seed", sy.seed, "rng seed");
    synth->add_option("--unknown-frac", sy.unknown_frac,
                      "override unknown test-author fraction");
    synth->add_option("--text-noise", sy.text_noise, "override text noise rate");
    synth->add_option("--out-dir", sy.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message
        return 2;
    }

    try {
        if (train_emb->parsed()) return run_train_emb(te);
        if (pipeline->parsed()) return run_pipeline_cmd(pl);
        if (cv_cmd->parsed()) return run_cv(cv);
        if (viz->parsed()) return run_viz(vz);
        if (synth->parsed()) return run_synth(sy);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
