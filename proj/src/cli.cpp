#include "treepat/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "treepat/constants.hpp"
#include "treepat/cumulants.hpp"
#include "treepat/digraph.hpp"
#include "treepat/embedding.hpp"
#include "treepat/errors.hpp"
#include "treepat/fused_paths.hpp"
#include "treepat/pattern.hpp"
#include "treepat/tree_json.hpp"
#include "treepat/tree_params.hpp"
#include "treepat/verify.hpp"

namespace treepat {

using nlohmann::json;

namespace {

struct Output {
  json data = json::object();
  std::string text;
  std::optional<std::string> csv;
  bool failed = false;  // validation failure: exit 1 after writing
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> splitOn(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::uint64_t parseUnsigned(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (text.empty() || text[0] == '-') throw std::invalid_argument(text);
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument(what + ": '" + text + "' is not a non-negative integer");
  return v;
}

// --- tree sources -----------------------------------------------------------

struct SplitFlags {
  unsigned b = 2, s = 1, s0 = 1, s1 = 0;
  std::string dist = "bst";
  std::string generator = "trickle";

  SplitParams params() const {
    SplitParams p;
    p.b = b;
    p.s = s;
    p.s0 = s0;
    p.s1 = s1;
    p.distribution = SplitDistribution::parse(dist, b);
    p.validate();
    return p;
  }
};

struct LoadedTree {
  TreeDocument doc;
  json meta;
};

/// complete:H, path:L, random:N[:SEED], bst:N[:SEED], split:N[:SEED], or a
/// JSON tree document path. `seedOverride` replaces the seed of random kinds.
LoadedTree loadTree(const std::string& spec, const SplitFlags& flags, std::uint64_t seed,
                    std::optional<std::uint64_t> seedOverride = std::nullopt) {
  const auto parts = splitOn(spec, ':');
  const std::string kind = parts.empty() ? "" : parts[0];
  auto arg = [&](std::size_t i, const char* what) {
    if (parts.size() <= i) throw std::invalid_argument("tree source '" + spec + "' is missing its " + what);
    return parseUnsigned(parts[i], std::string("tree source ") + what);
  };
  json meta{{"source", spec}};
  if (kind == "complete" || kind == "path") {
    if (parts.size() != 2) throw std::invalid_argument("tree source '" + spec + "' takes one size argument");
    const auto size = arg(1, kind == "complete" ? "height" : "length");
    if (kind == "complete") {
      if (size > 30) throw InfeasibleError("complete binary tree height " + std::to_string(size) + " exceeds the cap 30");
      return {TreeDocument(makeCompleteBinaryTree(static_cast<unsigned>(size))), meta};
    }
    return {TreeDocument(makePath(size)), meta};
  }
  if (kind == "random" || kind == "bst" || kind == "split") {
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("tree source '" + spec + "' expects " + kind + ":N[:SEED]");
    const auto n = arg(1, "size");
    std::uint64_t s = parts.size() == 3 ? arg(2, "seed") : seed;
    if (seedOverride) s = *seedOverride;
    meta["seed"] = s;
    if (kind == "random") return {TreeDocument(makeRandomRecursiveTree(n, s)), meta};
    const SplitParams params = kind == "bst" ? SplitParams::bstPreset() : flags.params();
    if (flags.generator != "trickle" && flags.generator != "multinomial")
      throw std::invalid_argument("generator must be trickle or multinomial");
    meta["generator"] = flags.generator;
    SplitTree t = flags.generator == "multinomial" ? generateMultinomial(params, n, s) : generateTrickleDown(params, n, s);
    meta["split"] = {{"b", params.b}, {"s", params.s}, {"s0", params.s0}, {"s1", params.s1},
                     {"distribution", params.distribution.name()}, {"n", n}};
    return {TreeDocument(std::move(t)), meta};
  }
  return {parseTreeDocument(readFile(spec)), meta};
}

bool isRandomSource(const std::string& spec) {
  const std::string kind = splitOn(spec, ':').empty() ? "" : splitOn(spec, ':')[0];
  return kind == "random" || kind == "bst" || kind == "split";
}

void describeTree(json& meta, const TreeDocument& doc) {
  meta["nodes"] = doc.tree().size();
  meta["height"] = doc.tree().height();
  meta["elements"] = doc.poset().size();
  meta["split_tree"] = doc.isSplit();
}

// --- patterns, graphs ---------------------------------------------------------

struct PatternFlags {
  std::string alpha;
  unsigned k = 0, alpha1 = 0;

  /// (k, alpha1) from --alpha or from --k/--alpha1.
  std::pair<unsigned, unsigned> shape() const {
    if (!alpha.empty()) {
      const Pattern p = Pattern::parse(alpha);
      return {p.length(), p.first()};
    }
    if (k == 0 || alpha1 == 0) throw std::invalid_argument("give --alpha, or both --k and --alpha1");
    if (alpha1 > k) throw std::invalid_argument("alpha1 must be in 1..k");
    return {k, alpha1};
  }
};

AcyclicDigraph loadGraph(const std::string& spec) {
  const auto parts = splitOn(spec, ':');
  if (spec == "diamond") return diamond();
  if (!parts.empty() && parts[0] == "path" && parts.size() == 2)
    return directedPath(static_cast<unsigned>(parseUnsigned(parts[1], "path length")));
  if (!parts.empty() && parts[0] == "star" && parts.size() == 2) {
    const auto kr = splitOn(parts[1], ',');
    if (kr.size() != 2) throw std::invalid_argument("star graphs are written star:K,R");
    return star(static_cast<unsigned>(parseUnsigned(kr[0], "star k")), static_cast<unsigned>(parseUnsigned(kr[1], "star r")));
  }
  return AcyclicDigraph::parseEdgeList(readFile(spec));
}

json edgesJson(const AcyclicDigraph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return edges;
}

TupleMode parseMode(const std::string& m) {
  if (m == "repetition") return TupleMode::WithRepetition;
  if (m == "distinct") return TupleMode::Distinct;
  throw std::invalid_argument("mode must be repetition or distinct, got '" + m + "'");
}

// --- config files -------------------------------------------------------------

/// Appends "--key=value" for every config entry whose option was not given
/// on the command line. Lines are `key = value`; '#' starts a comment.
std::vector<std::string> applyConfig(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::istringstream in(readFile(path));
  std::string line;
  int lineNo = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineNo) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::invalid_argument(path + ":" + std::to_string(lineNo) + ": invalid key '" + key + "'");
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) extra.push_back(flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

json resolvedConfig(const CLI::App* leaf) {
  json cfg = json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "out" || name.empty()) continue;
    if (opt->get_type_name().empty()) {  // a flag
      cfg[name] = opt->count() > 0;
      continue;
    }
    if (opt->count() > 0) {
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
      cfg[name] = joined;
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

// --- the command table --------------------------------------------------------

/// Option values of one leaf subcommand.
struct Opts {
  std::uint64_t seed = 1;
  std::string out;
  bool json = false;
  bool csv = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string config;

  std::string tree, graph, method, labels, mode, variant, suite;
  SplitFlags split;
  PatternFlags pat;
  unsigned r = 0, k = 0, ell = 1, maxR = 4, maxLen = 6, cap = kExactUniverseCap;
  std::size_t samples = 10000, treeSeeds = 0, trees = 0, maxNodes = 0, n = 0;
  unsigned bootstrap = 200, minHeight = 0, maxHeight = 0;
  bool naive = false, factored = false;
  double significance = 0;
};

struct Leaf {
  CLI::App* app;
  std::function<Output()> run;
};

class Cli {
 public:
  Cli() : app_("Permutation patterns in labelled trees: exact constants, embeddings, Monte Carlo", "treepat") {
    app_.require_subcommand(1);
    app_.option_defaults()->always_capture_default();
    buildTree();
    buildParam();
    buildPattern();
    buildEmbed();
    buildConst();
    buildMc();
    buildVerify();
  }

  int run(const std::vector<std::string>& rawArgs, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    try {
      args = applyConfig(rawArgs);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
    std::vector<std::string> argvStore{"treepat"};
    argvStore.insert(argvStore.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argvStore) argv.push_back(a.c_str());
    try {
      app_.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << helpFor(args);
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app_.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n" << helpFor(args);
      return 1;
    }

    const Leaf* leaf = nullptr;
    for (const auto& l : leaves_)
      if (l.app->parsed()) leaf = &l;
    if (leaf == nullptr) {
      err << "error: a subcommand is required\n" << app_.help();
      return 1;
    }
    const Opts& common = opts_.at(leaf->app);
    try {
      Output result = leaf->run();
      std::string rendered;
      if (common.json && common.csv) throw std::invalid_argument("--json and --csv are exclusive");
      if (common.csv) {
        if (!result.csv) throw std::invalid_argument("this command has no CSV form");
        rendered = *result.csv;
      } else if (common.json) {
        json doc{{"command", commandName(leaf->app)}, {"config", resolvedConfig(leaf->app)}};
        doc["result"] = std::move(result.data);
        rendered = doc.dump(2) + "\n";
      } else {
        rendered = result.text;
      }
      if (common.out.empty()) {
        out << rendered;
      } else {
        std::ofstream file(common.out);
        if (!file) throw std::invalid_argument("cannot write '" + common.out + "'");
        file << rendered;
      }
      return result.failed ? 1 : 0;
    } catch (const InfeasibleError& e) {
      err << "refused: " << e.what() << "\n";
      return 2;
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::out_of_range& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }

 private:
  CLI::App app_;
  std::vector<Leaf> leaves_;
  std::map<const CLI::App*, Opts> opts_;


  static std::string commandName(const CLI::App* leaf) {
    std::string name = leaf->get_name();
    for (const CLI::App* p = leaf->get_parent(); p != nullptr && p->get_parent() != nullptr; p = p->get_parent())
      name = p->get_name() + " " + name;
    return name;
  }

  std::string helpFor(const std::vector<std::string>& args) const {
    const CLI::App* cur = &app_;
    for (const auto& a : args) {
      bool found = false;
      for (const CLI::App* sub : cur->get_subcommands({}))
        if (sub->get_name() == a) {
          cur = sub;
          found = true;
          break;
        }
      if (!found && a.rfind("-", 0) != 0) break;
    }
    return cur->help();
  }

  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& desc, std::function<Output()> run) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    Opts& c = opts_[sub];
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Write output to this file instead of stdout");
    sub->add_flag("--json", c.json, "JSON output with the resolved config");
    sub->add_flag("--csv", c.csv, "CSV output");
    sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    sub->add_option("--config", c.config, "key = value file; command-line flags win");
    leaves_.push_back({sub, std::move(run)});
    return sub;
  }

  Opts& opts(const CLI::App* sub) { return opts_.at(sub); }

  void addTreeOption(CLI::App* sub, bool required = true) {
    Opts& o = opts(sub);
    auto* opt = sub->add_option("--tree", o.tree,
                                "complete:H, path:L, random:N[:SEED], bst:N[:SEED], split:N[:SEED] or a JSON file");
    if (required) opt->required();
    sub->add_option("--b", o.split.b, "split tree: branch factor");
    sub->add_option("--s", o.split.s, "split tree: leaf capacity");
    sub->add_option("--s0", o.split.s0, "split tree: balls kept by internal nodes");
    sub->add_option("--s1", o.split.s1, "split tree: balls forced to every child");
    sub->add_option("--dist", o.split.dist, "split vector: bst, dirichlet:A or fixed:P1,...,Pb");
    sub->add_option("--generator", o.split.generator, "split tree construction: trickle or multinomial");
  }

  void addPatternOption(CLI::App* sub) { sub->add_option("--alpha", opts(sub).pat.alpha, "Pattern, e.g. 231 or 1,10,2,...")->required(); }

  LoadedTree tree(const CLI::App* sub, std::optional<std::uint64_t> seedOverride = std::nullopt) {
    const Opts& o = opts(sub);
    LoadedTree t = loadTree(o.tree, o.split, o.seed, seedOverride);
    describeTree(t.meta, t.doc);
    return t;
  }

  // tree gen | show
  void buildTree() {
    CLI::App* grp = app_.add_subcommand("tree", "Generate or inspect trees");
    grp->require_subcommand(1);
    {
    CLI::App* gen = leaf(grp, "gen", "Write a tree document", {});
    Opts& o = opts(gen);
    addTreeOption(gen);
    leaves_.back().run = [this, &o, gen] {
      const auto t = tree(gen);
      Output res;
      res.data = json::parse(t.doc.serialize());
      res.text = t.doc.serialize() + "\n";
      return res;
    };
    }

    {
    CLI::App* show = leaf(grp, "show", "Summarise a tree", {});
    Opts& o = opts(show);
    addTreeOption(show);
    leaves_.back().run = [this, &o, show] {
      const auto t = tree(show);
      const RootedTree& rt = t.doc.tree();
      std::vector<std::uint64_t> profile(rt.height() + 1, 0);
      for (NodeId v = 0; v < rt.size(); ++v) ++profile[rt.depth(v)];
      Output res;
      res.data = t.meta;
      res.data["total_path_length"] = toString(totalPathLength(rt));
      res.data["depth_profile"] = profile;
      std::ostringstream s;
      s << "nodes " << rt.size() << "\nheight " << rt.height() << "\n";
      if (t.doc.isSplit()) {
        const SplitParams& p = t.doc.split().params();
        s << "balls " << t.doc.split().ballCount() << "\nparams b=" << p.b << " s=" << p.s << " s0=" << p.s0
          << " s1=" << p.s1 << " distribution=" << p.distribution.name() << "\nseed " << t.doc.split().seed() << "\n";
      }
      s << "total path length " << toString(totalPathLength(rt)) << "\ndepth profile";
      for (auto c : profile) s << ' ' << c;
      s << "\n";
      res.text = s.str();
      std::ostringstream csv;
      csv << "depth,nodes\n";
      for (std::size_t d = 0; d < profile.size(); ++d) csv << d << ',' << profile[d] << "\n";
      res.csv = csv.str();
      return res;
    };
    }
  }

  // param upsilon | tpl | ancestor-tail
  void buildParam() {
    CLI::App* grp = app_.add_subcommand("param", "Tree parameters");
    grp->require_subcommand(1);

    {
    CLI::App* ups = leaf(grp, "upsilon", "Generalised path length Upsilon_r^k", {});
    Opts& o = opts(ups);
    addTreeOption(ups);
    ups->add_option("--r", o.r, "Tuple arity")->default_val(1);
    ups->add_option("--k", o.k, "Pattern length")->default_val(2);
    ups->add_option("--mode", o.mode, "repetition or distinct tuples")->default_val("repetition");
    ups->add_flag("--naive", o.naive, "Enumerate tuples literally (guarded)");
    leaves_.back().run = [this, &o, ups] {
      const auto t = tree(ups);
      const UpsilonSpec spec{o.r, o.k, parseMode(o.mode)};
      const BigInt v = o.naive ? upsilonNaive(t.doc.poset(), spec) : upsilon(t.doc.poset(), spec);
      Output res;
      res.data = {{"tree_meta", t.meta}, {"r", o.r}, {"k", o.k}, {"mode", o.mode}, {"upsilon", toString(v)}};
      res.text = toString(v) + "\n";
      res.csv = "r,k,mode,upsilon\n" + std::to_string(o.r) + "," + std::to_string(o.k) + "," + o.mode + "," + toString(v) + "\n";
      return res;
    };
    }

    {
    CLI::App* tpl = leaf(grp, "tpl", "Total path length (sum of node depths)", {});
    Opts& o = opts(tpl);
    addTreeOption(tpl);
    leaves_.back().run = [this, &o, tpl] {
      const auto t = tree(tpl);
      const BigInt v = totalPathLength(t.doc.tree());
      Output res;
      res.data = {{"tree_meta", t.meta}, {"total_path_length", toString(v)}};
      res.text = toString(v) + "\n";
      res.csv = "total_path_length\n" + toString(v) + "\n";
      return res;
    };
    }

    {
    CLI::App* tail = leaf(grp, "ancestor-tail", "Ordered distinct pairs with at least ell common ancestors", {});
    Opts& o = opts(tail);
    addTreeOption(tail);
    tail->add_option("--ell", o.ell, "Threshold ell >= 1")->default_val(1);
    leaves_.back().run = [this, &o, tail] {
      const auto t = tree(tail);
      const RootedTree& rt = t.doc.tree();
      const BigInt v = ancestorTail(rt, o.ell);
      const BigInt n = static_cast<unsigned long>(rt.size());
      if (o.ell < 1) throw std::invalid_argument("ell must be at least 1");
      BigInt pow2 = 1;
      pow2 <<= (o.ell - 1);
      const Rational bound = makeRational(n * n, pow2);  // 2^(1-ell) n^2
      Output res;
      res.data = {{"tree_meta", t.meta}, {"ell", o.ell}, {"value", toString(v)}, {"bound", toString(bound)},
                {"within_bound", Rational(v) <= bound}};
      res.text = toString(v) + "\n";
      res.csv = "ell,value,bound\n" + std::to_string(o.ell) + "," + toString(v) + "," + toString(bound) + "\n";
      return res;
    };
    }
  }

  // pattern count | mean | dist
  void buildPattern() {
    CLI::App* grp = app_.add_subcommand("pattern", "Pattern occurrences");
    grp->require_subcommand(1);

    {
    CLI::App* count = leaf(grp, "count", "R(alpha, T) under one labelling", {});
    Opts& o = opts(count);
    addTreeOption(count);
    addPatternOption(count);
    count->add_option("--labels", o.labels, "random (from --seed), identity, or a comma list of labels")
        ->default_val("random");
    leaves_.back().run = [this, &o, count] {
      const auto t = tree(count);
      const ElementPoset poset = t.doc.poset();
      const Pattern alpha = Pattern::parse(o.pat.alpha);
      std::optional<Labelling> pi;
      if (o.labels == "random") pi = sampleLabelling(poset.size(), o.seed);
      else if (o.labels == "identity") pi = Labelling::identity(poset.size());
      else {
        std::vector<std::uint32_t> ls;
        for (const auto& x : splitOn(o.labels, ',')) ls.push_back(static_cast<std::uint32_t>(parseUnsigned(x, "label")));
        if (ls.size() != poset.size())
          throw std::invalid_argument("labelling has " + std::to_string(ls.size()) + " entries, the tree has " +
                                      std::to_string(poset.size()) + " elements");
        pi = Labelling(std::move(ls));
      }
      const auto c = countOccurrences(poset, alpha, *pi);
      Output res;
      res.data = {{"tree_meta", t.meta}, {"alpha", alpha.str()}, {"labels", o.labels}, {"seed", o.seed},
                {"count", c}};
      res.text = std::to_string(c) + "\n";
      res.csv = "alpha,count\n" + alpha.str() + "," + std::to_string(c) + "\n";
      return res;
    };
    }

    {
    CLI::App* mean = leaf(grp, "mean", "Exact E R(alpha, T)", {});
    Opts& o = opts(mean);
    addTreeOption(mean);
    addPatternOption(mean);
    leaves_.back().run = [this, &o, mean] {
      const auto t = tree(mean);
      const Pattern alpha = Pattern::parse(o.pat.alpha);
      const Rational m = expectedOccurrences(t.doc.poset(), alpha);
      Output res;
      res.data = {{"tree_meta", t.meta}, {"alpha", alpha.str()}, {"mean", toString(m)}, {"approx", toDouble(m)}};
      res.text = toString(m) + "\n";
      res.csv = "alpha,mean\n" + alpha.str() + "," + toString(m) + "\n";
      return res;
    };
    }

    {
    CLI::App* dist = leaf(grp, "dist", "Exact distribution by enumerating all labellings", {});
    Opts& o = opts(dist);
    addTreeOption(dist);
    addPatternOption(dist);
    dist->add_option("--cap", o.cap, "Largest universe to enumerate")->default_val(kExactUniverseCap);
    leaves_.back().run = [this, &o, dist] {
      const auto t = tree(dist);
      const Pattern alpha = Pattern::parse(o.pat.alpha);
      const auto pmf = exactDistribution(t.doc.poset(), alpha, o.cap);
      Output res;
      json entries = json::array();
      std::string text, csv = "value,probability\n";
      for (const auto& [v, p] : pmf) {
        entries.push_back({{"value", v}, {"probability", toString(p)}});
        text += std::to_string(v) + "\t" + toString(p) + "\n";
        csv += std::to_string(v) + "," + toString(p) + "\n";
      }
      res.data = {{"tree_meta", t.meta}, {"alpha", alpha.str()}, {"pmf", entries}};
      res.text = text;
      res.csv = csv;
      return res;
    };
    }
  }

  // embed count | enumerate
  void buildEmbed() {
    CLI::App* grp = app_.add_subcommand("embed", "Digraph embeddings");
    grp->require_subcommand(1);

    {
    CLI::App* count = leaf(grp, "count", "[G]_T: order-preserving injective embeddings", {});
    Opts& o = opts(count);
    addTreeOption(count);
    count->add_option("--graph", o.graph, "path:K, star:K,R, diamond, or an edge-list file")->required();
    count->add_option("--method", o.method, "dp, backtrack, star-formula or star-approx")->default_val("dp");
    leaves_.back().run = [this, &o, count] {
      const auto t = tree(count);
      const AcyclicDigraph g = loadGraph(o.graph);
      BigInt v;
      if (o.method == "dp") v = embeddingCount(g, t.doc.poset());
      else if (o.method == "backtrack") v = embeddingCountBacktrack(g, t.doc.poset());
      else if (o.method == "star-formula" || o.method == "star-approx") {
        const auto parts = splitOn(o.graph, ':');
        if (parts.size() != 2 || parts[0] != "star") throw std::invalid_argument(o.method + " needs --graph star:K,R");
        if (t.doc.isSplit()) throw std::invalid_argument(o.method + " is defined on node trees only");
        const auto kr = splitOn(parts[1], ',');
        const auto k = static_cast<unsigned>(parseUnsigned(kr[0], "star k"));
        const auto r = static_cast<unsigned>(parseUnsigned(kr[1], "star r"));
        v = o.method == "star-formula" ? starCountFormula(t.doc.tree(), k, r) : starCountApprox(t.doc.tree(), k, r);
      } else {
        throw std::invalid_argument("unknown method '" + o.method + "'");
      }
      const auto cls = classifyVertices(g);
      Output res;
      res.data = {{"tree_meta", t.meta},
                {"graph", o.graph},
                {"edges", edgesJson(g)},
                {"method", o.method},
                {"count", toString(v)},
                {"a0", cls.sinks.size()},
                {"a1", cls.ancestors.size()},
                {"a2", cls.commonAncestors.size()}};
      res.text = toString(v) + "\n";
      res.csv = "graph,method,count\n\"" + o.graph + "\"," + o.method + "," + toString(v) + "\n";
      return res;
    };
    }

    {
    CLI::App* en = leaf(grp, "enumerate", "Digraphs obtained by fusing r directed k-paths", {});
    Opts& o = opts(en);
    en->add_option("--k", o.k, "Path length in vertices")->required();
    en->add_option("--r", o.r, "Number of paths")->required();
    en->add_option("--variant", o.variant, "labelled, unlabelled, connected or family-f")->default_val("labelled");
    leaves_.back().run = [this, &o, en] {
      const auto fam = enumerateFusedPaths(o.k, o.r, parseFusedVariant(o.variant));
      Output res;
      json members = json::array();
      std::ostringstream text, csv;
      text << "# " << fam.members.size() << " members (k=" << o.k << ", r=" << o.r << ", " << toString(fam.variant)
           << ")\n";
      csv << "member,vertices,edges,connected\n";
      for (std::size_t i = 0; i < fam.members.size(); ++i) {
        const auto& g = fam.members[i].graph;
        members.push_back({{"vertices", g.vertexCount()},
                           {"edges", edgesJson(g)},
                           {"paths", fam.members[i].paths},
                           {"connected", g.isWeaklyConnected()}});
        text << "\n# member " << i << (g.isWeaklyConnected() ? "" : " (disconnected)") << "\n" << g.toEdgeList();
        std::string edges;
        for (const auto& [u, v] : g.edges()) edges += (edges.empty() ? "" : " ") + std::to_string(u) + "-" + std::to_string(v);
        csv << i << ',' << g.vertexCount() << ",\"" << edges << "\"," << (g.isWeaklyConnected() ? 1 : 0) << "\n";
      }
      res.data = {{"k", o.k}, {"r", o.r}, {"variant", toString(fam.variant)}, {"count", fam.members.size()},
                {"members", members}};
      res.text = text.str();
      res.csv = csv.str();
      return res;
    };
    }
  }

  // const d | a | bernoulli | table
  void buildConst() {
    CLI::App* grp = app_.add_subcommand("const", "Exact constants");
    grp->require_subcommand(1);
    auto patternShape = [this](CLI::App* sub) {
      Opts& o = opts(sub);
      sub->add_option("--alpha", o.pat.alpha, "Pattern (only its length and first entry matter)");
      sub->add_option("--k", o.pat.k, "Pattern length, with --alpha1");
      sub->add_option("--alpha1", o.pat.alpha1, "First pattern entry, with --k");
    };

    {
    CLI::App* d = leaf(grp, "d", "Cumulant constant D_{alpha,r}", {});
    Opts& o = opts(d);
    patternShape(d);
    d->add_option("--r", o.r, "Cumulant order")->required();
    d->add_flag("--factored", o.factored, "Print the denominator factored into primes");
    leaves_.back().run = [this, &o, d] {
      const auto [k, a1] = o.pat.shape();
      const Rational v = dConstant(k, a1, o.r);
      Output res;
      res.data = {{"k", k}, {"alpha1", a1}, {"r", o.r}, {"rational", toString(v)}, {"factored", factoredString(v)}};
      res.text = (o.factored ? factoredString(v) : toString(v)) + "\n";
      res.csv = "k,alpha1,r,rational,factored\n" + std::to_string(k) + "," + std::to_string(a1) + "," +
              std::to_string(o.r) + "," + toString(v) + "," + factoredString(v) + "\n";
      return res;
    };
    }

    {
    CLI::App* a = leaf(grp, "a", "Probability a_{k,ell} that every ray of the star S_{k,ell} induces alpha", {});
    Opts& o = opts(a);
    patternShape(a);
    a->add_option("--ell", o.ell, "Number of rays")->required();
    leaves_.back().run = [this, &o, a] {
      const auto [k, a1] = o.pat.shape();
      const Rational v = starLabelProbability(k, a1, o.ell);
      Output res;
      res.data = {{"k", k}, {"alpha1", a1}, {"ell", o.ell}, {"rational", toString(v)}};
      res.text = toString(v) + "\n";
      res.csv = "k,alpha1,ell,rational\n" + std::to_string(k) + "," + std::to_string(a1) + "," + std::to_string(o.ell) +
              "," + toString(v) + "\n";
      return res;
    };
    }

    {
    CLI::App* b = leaf(grp, "bernoulli", "Bernoulli number B_r (B_1 = -1/2)", {});
    Opts& o = opts(b);
    b->add_option("--r", o.r, "Index")->required();
    leaves_.back().run = [this, &o, b] {
      const Rational v = bernoulli(o.r);
      Output res;
      res.data = {{"r", o.r}, {"rational", toString(v)}};
      res.text = toString(v) + "\n";
      res.csv = "r,rational\n" + std::to_string(o.r) + "," + toString(v) + "\n";
      return res;
    };
    }

    {
    CLI::App* table = leaf(grp, "table", "D_{alpha,r} for every length and first-entry class", {});
    Opts& o = opts(table);
    table->add_option("--max-len", o.maxLen, "Largest pattern length (<= 8)")->default_val(6);
    table->add_option("--max-r", o.maxR, "Largest r (<= 6)")->default_val(5);
    leaves_.back().run = [this, &o, table] {
      const auto rows = dTable(o.maxLen, o.maxR);
      Output res;
      json entries = json::array();
      std::ostringstream text, csv;
      csv << "k,alpha1_class,r,rational,factored\n";
      for (const auto& row : rows) {
        text << "k=" << row.k << " " << row.classLabel();
        for (unsigned r = 1; r <= row.values.size(); ++r) {
          const Rational& v = row.values[r - 1];
          text << "  r" << r << "=" << toString(v);
          csv << row.k << ",\"" << row.classLabel() << "\"," << r << "," << toString(v) << ",\"" << factoredString(v)
              << "\"\n";
          entries.push_back({{"k", row.k},
                             {"alpha1_class", row.classLabel()},
                             {"r", r},
                             {"rational", toString(v)},
                             {"factored", factoredString(v)}});
        }
        text << "\n";
      }
      res.data = {{"max_len", o.maxLen}, {"max_r", o.maxR}, {"entries", entries}};
      res.text = text.str();
      res.csv = csv.str();
      return res;
    };
    }
  }

  // mc cumulants | ratio
  struct TreeRun {
    LoadedTree tree;
    std::uint64_t treeSeed;
    std::vector<CumulantEstimate> estimates;
  };

  std::vector<TreeRun> sampleTrees(const CLI::App* sub, unsigned maxR) {
    const Opts& o = opts(sub);
    const Opts& c = o;
    const Pattern alpha = Pattern::parse(o.pat.alpha);
    std::vector<TreeRun> runs;
    const std::size_t repeats = o.treeSeeds == 0 ? 1 : o.treeSeeds;
    if (o.treeSeeds > 0 && !isRandomSource(o.tree))
      throw std::invalid_argument("--tree-seeds needs a random tree source (random:, bst: or split:)");
    for (std::size_t i = 0; i < repeats; ++i) {
      std::optional<std::uint64_t> override;
      if (o.treeSeeds > 0) override = deriveSeed(c.seed, 0x7ee5eed0ULL + i);
      LoadedTree t = tree(sub, override);
      SamplingOptions opts;
      opts.samples = o.samples;
      opts.seed = c.seed;
      opts.threads = c.threads;
      opts.bootstrapResamples = o.bootstrap;
      auto est = estimateCumulants(t.doc.poset(), alpha, maxR, opts);
      const std::uint64_t ts = override.value_or(t.meta.value("seed", std::uint64_t{0}));
      runs.push_back({std::move(t), ts, std::move(est)});
    }
    return runs;
  }

  void addMcOptions(CLI::App* sub) {
    Opts& o = opts(sub);
    addTreeOption(sub);
    addPatternOption(sub);
    sub->add_option("--samples", o.samples, "Labellings per tree (>= 30)")->default_val(10000);
    sub->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples for standard errors")->default_val(200);
    sub->add_option("--tree-seeds", o.treeSeeds, "Repeat over this many random trees")->default_val(0);
  }

  void buildMc() {
    CLI::App* grp = app_.add_subcommand("mc", "Monte Carlo over uniform labellings");
    grp->require_subcommand(1);

    {
    CLI::App* cum = leaf(grp, "cumulants", "Estimated cumulants of R(alpha, T)", {});
    Opts& o = opts(cum);
    addMcOptions(cum);
    cum->add_option("--max-r", o.maxR, "Highest order (<= 6)")->default_val(4);
    leaves_.back().run = [this, &o, cum] {
      const auto runs = sampleTrees(cum, o.maxR);
      Output res;
      json trees = json::array();
      std::ostringstream text, csv;
      csv << "tree_seed,r,estimate,se,estimator,samples\n";
      for (const auto& run : runs) {
        json est = json::array();
        if (runs.size() > 1) text << "tree seed " << run.treeSeed << "\n";
        for (const auto& e : run.estimates) {
          const std::string kind = e.estimator == CumulantEstimator::KStatistic ? "k-statistic" : "sample-cumulant";
          est.push_back({{"r", e.order}, {"estimate", e.estimate}, {"se", e.standardError}, {"estimator", kind}});
          text << "kappa_" << e.order << " " << num(e.estimate) << " +- " << num(e.standardError)
               << (e.estimator == CumulantEstimator::SampleCumulant ? " (plug-in, biased)" : "") << "\n";
          csv << run.treeSeed << ',' << e.order << ',' << num(e.estimate) << ',' << num(e.standardError) << ','
              << kind << ',' << e.sampleCount << "\n";
        }
        trees.push_back({{"tree_meta", run.tree.meta}, {"estimates", est}});
      }
      res.data = {{"alpha", o.pat.alpha}, {"samples", o.samples}, {"seed", o.seed},
                {"bootstrap", o.bootstrap}, {"trees", trees}};
      res.text = text.str();
      res.csv = csv.str();
      return res;
    };
    }

    {
    CLI::App* ratio = leaf(grp, "ratio", "kappa_r estimate against D_{alpha,r} Upsilon_r^k", {});
    Opts& o = opts(ratio);
    addMcOptions(ratio);
    ratio->add_option("--r", o.r, "Cumulant order (<= 6)")->default_val(2);
    ratio->add_option("--mode", o.mode, "Upsilon tuples: repetition or distinct")->default_val("repetition");
    leaves_.back().run = [this, &o, ratio] {
      if (o.r < 1 || o.r > 6) throw std::invalid_argument("r must be in 1..6");
      const auto runs = sampleTrees(ratio, o.r);
      const Pattern alpha = Pattern::parse(o.pat.alpha);
      Output res;
      json rows = json::array();
      std::ostringstream text, csv;
      csv << "tree_seed,alpha,r,estimate,se,samples,seed,upsilon,d_constant,ratio,ratio_se\n";
      for (const auto& run : runs) {
        const auto& e = run.estimates[o.r - 1];
        const auto tr = theoremRatio(run.tree.doc.poset(), alpha, o.r, e, parseMode(o.mode));
        json row{{"tree_meta", run.tree.meta},
                 {"alpha", alpha.str()},
                 {"r", o.r},
                 {"estimate", e.estimate},
                 {"se", e.standardError},
                 {"samples", e.sampleCount},
                 {"seed", o.seed},
                 {"upsilon", o.r == 1 ? json(nullptr) : json(toString(tr.upsilon))},
                 {"d_constant", toString(tr.d)},
                 {"ratio", tr.ratio ? json(*tr.ratio) : json(nullptr)},
                 {"ratio_se", tr.ratioSE ? json(*tr.ratioSE) : json(nullptr)}};
        if (tr.dIsZero) {
          row["ratio_undefined"] = true;
          row["kappa_over_upsilon"] = tr.scaled;
          row["note"] = "D is zero: only kappa_r = o(Upsilon) is predicted, so kappa_over_upsilon should decay";
        }
        rows.push_back(row);
        if (runs.size() > 1) text << "tree seed " << run.treeSeed << ": ";
        if (tr.ratio)
          text << "ratio " << num(*tr.ratio) << " +- " << num(*tr.ratioSE) << " (estimate " << num(e.estimate)
               << ", D " << toString(tr.d) << ", Upsilon " << (o.r == 1 ? std::string("-") : toString(tr.upsilon))
               << ")\n";
        else
          text << "ratio undefined (D = " << toString(tr.d) << "); kappa/Upsilon " << num(tr.scaled) << "\n";
        csv << run.treeSeed << ',' << alpha.str() << ',' << o.r << ',' << num(e.estimate) << ','
            << num(e.standardError) << ',' << e.sampleCount << ',' << o.seed << ','
            << (o.r == 1 ? std::string() : toString(tr.upsilon)) << ',' << toString(tr.d) << ','
            << (tr.ratio ? num(*tr.ratio) : std::string()) << ',' << (tr.ratioSE ? num(*tr.ratioSE) : std::string())
            << "\n";
      }
      res.data = runs.size() == 1 ? rows[0] : json{{"runs", rows}};
      res.text = text.str();
      res.csv = csv.str();
      return res;
    };
    }
  }

  // verify <suite>
  void buildVerify() {
    {
    CLI::App* v = leaf(&app_, "verify", "Run a verification suite", {});
    Opts& o = opts(v);
    v->add_option("suite", o.suite, "thm1, table, star-identity, embed-scaling, split-good-nodes, generator-agreement")
        ->required();
    addTreeOption(v, false);
    v->add_option("--max-r", o.maxR, "thm1: highest cumulant order")->default_val(4);
    v->add_option("--k", o.k, "star-identity: path length")->default_val(0);
    v->add_option("--r", o.r, "star-identity: number of rays")->default_val(0);
    v->add_option("--trees", o.trees, "Number of random trees (0: suite default)")->default_val(0);
    v->add_option("--max-nodes", o.maxNodes, "Largest random tree (0: suite default)")->default_val(0);
    v->add_option("--min-height", o.minHeight, "embed-scaling: smallest height")->default_val(0);
    v->add_option("--max-height", o.maxHeight, "embed-scaling: largest height")->default_val(0);
    v->add_option("--n", o.n, "Split suites: balls per tree (0: suite default)")->default_val(0);
    v->add_option("--significance", o.significance, "generator-agreement: test level")->default_val(0);
    leaves_.back().run = [this, &o, v] {
      VerifyConfig cfg;
      cfg.seed = o.seed;
      if (!o.tree.empty()) cfg.tree = loadTree(o.tree, o.split, cfg.seed).doc.tree();
      cfg.maxR = o.maxR;
      cfg.k = o.k;
      cfg.r = o.r;
      cfg.trees = o.trees;
      cfg.maxNodes = o.maxNodes;
      cfg.minHeight = o.minHeight;
      cfg.maxHeight = o.maxHeight;
      cfg.n = o.n;
      cfg.significance = o.significance;
      if (v->get_option("--b")->count() || v->get_option("--dist")->count() || v->get_option("--s")->count() ||
          v->get_option("--s0")->count() || v->get_option("--s1")->count())
        cfg.params = o.split.params();
      const VerifyReport rep = runVerifySuite(o.suite, cfg);
      Output res;
      json checks = json::array();
      std::ostringstream text, csv;
      csv << "check,measured,expected,tolerance,pass,informational\n";
      for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"informational", c.informational}});
        text << (c.informational ? "info" : (c.pass ? "ok  " : "FAIL")) << "  " << c.name << ": " << c.measured;
        if (!c.expected.empty()) text << " (expected " << c.expected << ")";
        text << "\n";
        csv << '"' << c.name << "\"," << c.measured << ",\"" << c.expected << "\",\"" << c.tolerance << "\","
            << c.pass << ',' << c.informational << "\n";
      }
      text << (rep.pass() ? "PASS " : "FAIL ") << rep.passed() << "/" << rep.counted() << "\n";
      res.data = {{"suite", rep.suite}, {"seed", rep.seed},       {"pass", rep.pass()},
                {"passed", rep.passed()}, {"counted", rep.counted()}, {"checks", checks}};
      res.text = text.str();
      res.csv = csv.str();
      res.failed = !rep.pass();
      return res;
    };
    }
  }
};

}  // namespace

int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli;
  return cli.run(args, out, err);
}

}  // namespace treepat
