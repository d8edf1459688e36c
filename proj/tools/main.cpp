// Command-line front end: CSV ingestion, method selection, seeded
// reproducible runs, and JSON/TSV emission of depth, PCA, depth-vs-depth,
// cross-validation, and timing reports.
//
// Exit codes: 0 success, 1 cross-validation mismatch (or unexpected
// failure), 2 parse/usage error, 3 dimension mismatch, 4 degeneracy
// unresolved after retries.
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deepcore/applications.hpp"
#include "deepcore/csv.hpp"
#include "deepcore/oracles.hpp"
#include "deepcore/rng.hpp"

namespace {

using deepcore::DepthMethod;
using deepcore::DepthOptions;
using deepcore::DepthResult;
using deepcore::Index;
using deepcore::Matrix;
using deepcore::PointCloud;
using deepcore::SeededRng;
using deepcore::Vector;
using json = nlohmann::ordered_json;

// --- formatting --------------------------------------------------------------

// Doubles are printed with 12 significant digits, locale-independent.
std::string fmtDouble(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

// The nearest double to the 12-significant-digit decimal, so JSON numbers
// render as that decimal.
double rounded12(double v) { return std::strtod(fmtDouble(v).c_str(), nullptr); }

std::string joinVector(const Vector& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += fmtDouble(v[i]);
  }
  return out;
}

json vectorToJson(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(rounded12(v[i]));
  return arr;
}

// --- configuration -----------------------------------------------------------

const std::map<std::string, DepthMethod> kMethodNames = {
    {"exact", DepthMethod::Exact},
    {"comb", DepthMethod::Combinatorial},
    {"planar", DepthMethod::Planar},
    {"approx", DepthMethod::Approximate}};

std::string methodName(DepthMethod method) {
  for (const auto& [name, value] : kMethodNames) {
    if (value == method) return name;
  }
  return "unknown";
}

std::uint64_t parseSeedText(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw deepcore::ParseError(what + " is not an unsigned integer: " + text);
  }
  return value;
}

// Seed precedence: --seed flag, then DEEPCORE_SEED, then 0.
std::uint64_t resolveSeed(const std::string& flagText) {
  if (!flagText.empty()) return parseSeedText(flagText, "--seed");
  if (const char* env = std::getenv("DEEPCORE_SEED")) {
    return parseSeedText(env, "DEEPCORE_SEED");
  }
  return 0;
}

// Shared knobs of every depth-running subcommand.
struct CommonConfig {
  std::string seedText;
  std::string method = "exact";
  Index approxDirections = 1000;
  double perturb = 1e-7;
  int maxRetries = 5;
  std::string format = "json";
  bool noTiming = false;
};

void addCommonOptions(CLI::App& cmd, CommonConfig& cfg, bool withMethod) {
  cmd.add_option("--seed", cfg.seedText,
                 "RNG seed (default: DEEPCORE_SEED env var, then 0)");
  if (withMethod) {
    cmd.add_option("--method", cfg.method, "exact|comb|planar|approx")
        ->check(CLI::IsMember({"exact", "comb", "planar", "approx"}));
    cmd.add_option("--approx-dirs", cfg.approxDirections,
                   "direction budget for --method approx")
        ->check(CLI::PositiveNumber);
  }
  cmd.add_option("--perturb", cfg.perturb,
                 "relative jitter magnitude for degeneracy retries");
  cmd.add_option("--max-retries", cfg.maxRetries,
                 "perturbation attempts after the pristine try")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--format", cfg.format, "json|tsv")
      ->check(CLI::IsMember({"json", "tsv"}));
  cmd.add_flag("--no-timing", cfg.noTiming,
               "omit wall-clock fields so identical runs emit identical "
               "bytes");
}

DepthOptions makeDepthOptions(const CommonConfig& cfg, std::uint64_t seed) {
  DepthOptions options;
  options.method = kMethodNames.at(cfg.method);
  options.approxDirections = cfg.approxDirections;
  options.search.seed = seed;
  options.search.perturbMagnitude = cfg.perturb;
  options.search.maxRetries = cfg.maxRetries;
  return options;
}

double elapsedMs(std::chrono::steady_clock::time_point from) {
  const auto delta = std::chrono::steady_clock::now() - from;
  return std::chrono::duration<double, std::milli>(delta).count();
}

Matrix gaussianMatrix(Index n, Index d, std::uint64_t seed) {
  SeededRng rng(seed);
  Matrix m(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

// --- depth -------------------------------------------------------------------

struct DepthConfig {
  CommonConfig common;
  std::string dataPath;
  std::string pointText;
  bool earlyExit = false;
};

int runDepth(const DepthConfig& cfg) {
  const std::uint64_t seed = resolveSeed(cfg.common.seedText);
  const PointCloud cloud{deepcore::readCsvMatrix(cfg.dataPath)};
  const Vector query = deepcore::parseVector(cfg.pointText);

  DepthOptions options = makeDepthOptions(cfg.common, seed);
  options.search.earlyExit = cfg.earlyExit;

  const auto start = std::chrono::steady_clock::now();
  const DepthResult result = computeDepth(cloud, query, options);
  const double ms = elapsedMs(start);

  json out;
  out["depth"] = result.rational();
  out["depth_value"] = rounded12(result.value());
  out["count"] = result.count;
  out["n"] = result.sampleSize;
  out["d"] = cloud.dimension();
  out["method"] = cfg.common.method;
  out["witness_direction"] =
      result.witness.has_value() ? vectorToJson(*result.witness) : json();
  out["cones_visited"] = result.diagnostics.conesVisited;
  out["lp_calls"] = result.diagnostics.lpCalls;
  out["lp_cache_hits"] = result.diagnostics.lpCacheHits;
  out["generations"] = result.diagnostics.generations;
  out["mirror_duplicates"] = result.diagnostics.mirrorDuplicates;
  out["perturb_retries"] = result.diagnostics.perturbRetries;
  out["seed"] = seed;
  if (!cfg.common.noTiming) out["wall_time_ms"] = rounded12(ms);

  if (cfg.common.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::string header;
    std::string row;
    for (const auto& [key, value] : out.items()) {
      if (!header.empty()) {
        header += "\t";
        row += "\t";
      }
      header += key;
      if (key == "witness_direction") {
        row += result.witness.has_value() ? joinVector(*result.witness) : "";
      } else if (value.is_string()) {
        row += value.get<std::string>();
      } else if (value.is_number_float()) {
        row += fmtDouble(value.get<double>());
      } else {
        row += value.dump();
      }
    }
    std::cout << header << "\n" << row << "\n";
  }
  return 0;
}

// --- check -------------------------------------------------------------------

struct CheckConfig {
  CommonConfig common;
  std::vector<Index> dims = {2, 3};
  std::vector<Index> sizes = {8, 9, 10, 11, 12, 13, 14};
  int reps = 50;
  bool invertFacetTest = false;
};

// One seeded instance: a gaussian cloud and a query that alternates between
// a point deep inside (a midpoint of two sample points) and a scaled draw
// that may fall outside the hull.
std::pair<PointCloud, Vector> checkInstance(Index d, Index n,
                                            std::uint64_t tag) {
  const Matrix points = gaussianMatrix(n, d, deepcore::mixSeed(tag, 0x11u));
  SeededRng rng(deepcore::mixSeed(tag, 0x22u));
  Vector query(d);
  if (rng.uniform01() < 0.5) {
    const Index a = static_cast<Index>(rng.nextUint64() %
                                       static_cast<std::uint64_t>(n));
    const Index b = static_cast<Index>(rng.nextUint64() %
                                       static_cast<std::uint64_t>(n));
    query = 0.5 * (points.row(a) + points.row(b)).transpose();
  } else {
    for (Index j = 0; j < d; ++j) query[j] = 1.5 * rng.gaussian();
  }
  return {PointCloud(points), query};
}

int runCheck(const CheckConfig& cfg) {
  const std::uint64_t seed = resolveSeed(cfg.common.seedText);

  json cells = json::array();
  Index totalMismatches = 0;

  for (const Index d : cfg.dims) {
    for (const Index n : cfg.sizes) {
      json cell;
      cell["d"] = d;
      cell["n"] = n;
      if (n < d + 2) {
        cell["skipped"] = "needs n >= d + 2";
        cells.push_back(cell);
        continue;
      }

      Index mismatches = 0;
      Index errors = 0;
      double exactMs = 0.0;
      double oracleMs = 0.0;
      for (int rep = 0; rep < cfg.reps; ++rep) {
        const std::uint64_t tag = deepcore::mixSeed(
            deepcore::mixSeed(deepcore::mixSeed(seed,
                                                static_cast<std::uint64_t>(d)),
                              static_cast<std::uint64_t>(n)),
            static_cast<std::uint64_t>(rep));
        const auto [cloud, query] = checkInstance(d, n, tag);

        // The methods must be compared on a common sample: when an instance
        // is degenerate (for example the query sits on a segment between two
        // sample points), each method's own retry loop would jitter
        // independently and could settle on different nearby samples whose
        // integer counts legitimately differ. So retries are driven here:
        // every attempt runs all methods on the same (possibly jittered)
        // cloud with their internal retries disabled, and the pair is
        // re-jittered together whenever any method reports degeneracy.
        DepthOptions exact = makeDepthOptions(cfg.common, tag);
        exact.method = DepthMethod::Exact;
        exact.search.invertFacetTest = cfg.invertFacetTest;
        exact.search.maxRetries = 0;
        DepthOptions oracle = exact;
        oracle.method = DepthMethod::Combinatorial;
        oracle.search.invertFacetTest = false;
        DepthOptions sweep = oracle;
        sweep.method = DepthMethod::Planar;

        const int pairRetries = cfg.common.maxRetries;
        for (int attempt = 0; attempt <= pairRetries; ++attempt) {
          const PointCloud sample =
              attempt == 0
                  ? cloud
                  : PointCloud(deepcore::perturb(
                        cloud, cfg.common.perturb,
                        deepcore::mixSeed(
                            tag, static_cast<std::uint64_t>(attempt))));
          try {
            const auto startExact = std::chrono::steady_clock::now();
            const DepthResult a = computeDepth(sample, query, exact);
            const double exactElapsed = elapsedMs(startExact);

            const auto startOracle = std::chrono::steady_clock::now();
            const DepthResult b = computeDepth(sample, query, oracle);
            oracleMs += elapsedMs(startOracle);
            exactMs += exactElapsed;

            if (a.count != b.count) ++mismatches;
            if (d == 2) {
              const DepthResult c = computeDepth(sample, query, sweep);
              if (a.count != c.count) ++mismatches;
            }
            break;
          } catch (const deepcore::DepthError&) {
            if (attempt == pairRetries) {
              // No attempt produced counts for every method, so the
              // instance cannot be validated.
              ++errors;
              ++mismatches;
            }
          }
        }
      }

      cell["reps"] = cfg.reps;
      cell["mismatches"] = mismatches;
      cell["errors"] = errors;
      if (!cfg.common.noTiming) {
        cell["exact_ms_mean"] = rounded12(exactMs / cfg.reps);
        cell["oracle_ms_mean"] = rounded12(oracleMs / cfg.reps);
      }
      cells.push_back(cell);
      totalMismatches += mismatches;
    }
  }

  json out;
  out["seed"] = seed;
  out["reps"] = cfg.reps;
  out["invert_facet_test"] = cfg.invertFacetTest;
  out["cells"] = cells;
  out["total_mismatches"] = totalMismatches;

  if (cfg.common.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "d\tn\treps\tmismatches\terrors\tskipped\n";
    for (const auto& cell : cells) {
      const bool skipped = cell.contains("skipped");
      std::cout << cell["d"].get<Index>() << "\t" << cell["n"].get<Index>()
                << "\t" << (skipped ? 0 : cell["reps"].get<int>()) << "\t"
                << (skipped ? 0 : cell["mismatches"].get<Index>()) << "\t"
                << (skipped ? 0 : cell["errors"].get<Index>()) << "\t"
                << (skipped ? cell["skipped"].get<std::string>() : "") << "\n";
    }
    std::cout << "total_mismatches\t" << totalMismatches << "\n";
  }
  return totalMismatches == 0 ? 0 : 1;
}

// --- pca ---------------------------------------------------------------------

struct PcaConfig {
  CommonConfig common;
  std::string dataPath;
};

int runPca(const PcaConfig& cfg) {
  const std::uint64_t seed = resolveSeed(cfg.common.seedText);
  const PointCloud cloud{deepcore::readCsvMatrix(cfg.dataPath)};
  const DepthOptions options = makeDepthOptions(cfg.common, seed);

  const deepcore::RobustPcaResult pca = robustPca(cloud, options);

  json axes = json::array();
  for (Index c = 0; c < pca.axes.cols(); ++c) {
    axes.push_back(vectorToJson(pca.axes.col(c)));
  }
  json depths = json::array();
  json depthValues = json::array();
  for (Index i = 0; i < cloud.size(); ++i) {
    depths.push_back(pca.field.counts[static_cast<std::size_t>(i)]);
    depthValues.push_back(rounded12(pca.field.value(i)));
  }

  json out;
  out["n"] = cloud.size();
  out["d"] = cloud.dimension();
  out["method"] = cfg.common.method;
  out["center"] = vectorToJson(pca.center);
  out["axes"] = axes;
  out["singular_values"] = vectorToJson(pca.singularValues);
  out["depth_counts"] = depths;
  out["depth_values"] = depthValues;
  out["rank_deficient"] = pca.rankDeficient;
  out["seed"] = seed;

  if (cfg.common.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "center\t" << joinVector(pca.center) << "\n";
    for (Index c = 0; c < pca.axes.cols(); ++c) {
      std::cout << "axis_" << (c + 1) << "\t" << joinVector(pca.axes.col(c))
                << "\n";
    }
    std::cout << "singular_values\t" << joinVector(pca.singularValues) << "\n";
    std::cout << "depth_counts";
    for (const auto& c : depths) std::cout << "\t" << c.get<Index>();
    std::cout << "\nrank_deficient\t" << (pca.rankDeficient ? 1 : 0) << "\n";
  }
  return 0;
}

// --- ddplot ------------------------------------------------------------------

struct DdplotConfig {
  CommonConfig common;
  std::string dataPath1;
  std::string dataPath2;
  bool excludeOutsiders = false;
};

int runDdplot(const DdplotConfig& cfg) {
  const std::uint64_t seed = resolveSeed(cfg.common.seedText);
  const PointCloud first{deepcore::readCsvMatrix(cfg.dataPath1)};
  const PointCloud second{deepcore::readCsvMatrix(cfg.dataPath2)};
  const DepthOptions options = makeDepthOptions(cfg.common, seed);

  const deepcore::DdPlot plot =
      ddPlot(first, second, options, cfg.excludeOutsiders);

  if (cfg.common.format == "json") {
    json rows = json::array();
    for (Index r = 0; r < plot.coords.rows(); ++r) {
      json row;
      row["d1"] = rounded12(plot.coords(r, 0));
      row["d2"] = rounded12(plot.coords(r, 1));
      row["label"] = plot.labels[static_cast<std::size_t>(r)];
      rows.push_back(row);
    }
    json out;
    out["n1"] = first.size();
    out["n2"] = second.size();
    out["method"] = cfg.common.method;
    out["exclude_outsiders"] = cfg.excludeOutsiders;
    out["rows"] = rows;
    out["seed"] = seed;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "D1\tD2\tlabel\n";
    for (Index r = 0; r < plot.coords.rows(); ++r) {
      std::cout << fmtDouble(plot.coords(r, 0)) << "\t"
                << fmtDouble(plot.coords(r, 1)) << "\t"
                << plot.labels[static_cast<std::size_t>(r)] << "\n";
    }
  }
  return 0;
}

// --- bench -------------------------------------------------------------------

struct BenchConfig {
  CommonConfig common;
  std::vector<Index> dims = {2, 3};
  std::vector<Index> sizes = {10, 20, 40};
  int reps = 3;
};

int runBench(const BenchConfig& cfg) {
  const std::uint64_t seed = resolveSeed(cfg.common.seedText);

  json cells = json::array();
  for (const Index d : cfg.dims) {
    for (const Index n : cfg.sizes) {
      if (n < d + 2) continue;
      double ms = 0.0;
      Index cones = 0;
      Index lpCalls = 0;
      for (int rep = 0; rep < cfg.reps; ++rep) {
        const std::uint64_t tag = deepcore::mixSeed(
            deepcore::mixSeed(deepcore::mixSeed(seed,
                                                static_cast<std::uint64_t>(d)),
                              static_cast<std::uint64_t>(n)),
            static_cast<std::uint64_t>(rep));
        const auto [cloud, query] = checkInstance(d, n, tag);
        DepthOptions options = makeDepthOptions(cfg.common, tag);
        const auto start = std::chrono::steady_clock::now();
        const DepthResult result = computeDepth(cloud, query, options);
        ms += elapsedMs(start);
        cones += result.diagnostics.conesVisited;
        lpCalls += result.diagnostics.lpCalls;
      }
      json cell;
      cell["d"] = d;
      cell["n"] = n;
      cell["reps"] = cfg.reps;
      cell["cones_visited_mean"] =
          rounded12(static_cast<double>(cones) / cfg.reps);
      cell["lp_calls_mean"] =
          rounded12(static_cast<double>(lpCalls) / cfg.reps);
      if (!cfg.common.noTiming) cell["wall_ms_mean"] = rounded12(ms / cfg.reps);
      cells.push_back(cell);
    }
  }

  json out;
  out["seed"] = seed;
  out["method"] = cfg.common.method;
  out["cells"] = cells;

  if (cfg.common.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "d\tn\treps\tcones_visited_mean\tlp_calls_mean"
              << (cfg.common.noTiming ? "" : "\twall_ms_mean") << "\n";
    for (const auto& cell : cells) {
      std::cout << cell["d"].get<Index>() << "\t" << cell["n"].get<Index>()
                << "\t" << cell["reps"].get<int>() << "\t"
                << fmtDouble(cell["cones_visited_mean"].get<double>()) << "\t"
                << fmtDouble(cell["lp_calls_mean"].get<double>());
      if (!cfg.common.noTiming) {
        std::cout << "\t" << fmtDouble(cell["wall_ms_mean"].get<double>());
      }
      std::cout << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact halfspace depth: cone-search engine, reference "
               "oracles, and depth-based statistics"};
  app.require_subcommand(1);

  DepthConfig depthCfg;
  CLI::App* depthCmd =
      app.add_subcommand("depth", "Depth of one query point in a data cloud");
  depthCmd->add_option("--data", depthCfg.dataPath, "CSV file, one point "
                       "per line")->required();
  depthCmd->add_option("--point", depthCfg.pointText,
                       "query coordinates \"c1,c2,...\"")->required();
  depthCmd->add_flag("--early-exit", depthCfg.earlyExit,
                     "stop the traversal once the minimum cannot improve");
  addCommonOptions(*depthCmd, depthCfg.common, /*withMethod=*/true);

  CheckConfig checkCfg;
  CLI::App* checkCmd = app.add_subcommand(
      "check", "Cross-validate the cone search against the oracles on a "
               "seeded random grid");
  checkCmd->add_option("--dims", checkCfg.dims, "dimensions to test")
      ->delimiter(',');
  checkCmd->add_option("--sizes", checkCfg.sizes, "sample sizes to test")
      ->delimiter(',');
  checkCmd->add_option("--reps", checkCfg.reps, "instances per (d, n) cell")
      ->check(CLI::PositiveNumber);
  checkCmd->add_flag("--invert-facet-test", checkCfg.invertFacetTest,
                     "fault injection: invert every facet verdict (the check "
                     "must then fail)");
  addCommonOptions(*checkCmd, checkCfg.common, /*withMethod=*/false);

  PcaConfig pcaCfg;
  CLI::App* pcaCmd = app.add_subcommand(
      "pca", "Principal axes of the depth-scaled sign transform");
  pcaCmd->add_option("--data", pcaCfg.dataPath, "CSV file")->required();
  addCommonOptions(*pcaCmd, pcaCfg.common, /*withMethod=*/true);

  DdplotConfig ddCfg;
  CLI::App* ddCmd = app.add_subcommand(
      "ddplot", "Depth-vs-depth coordinates for two samples");
  ddCmd->add_option("--data1", ddCfg.dataPath1, "first CSV file")->required();
  ddCmd->add_option("--data2", ddCfg.dataPath2, "second CSV file")->required();
  ddCmd->add_flag("--exclude-outsiders", ddCfg.excludeOutsiders,
                  "drop points outside both hulls (coordinates (0, 0))");
  addCommonOptions(*ddCmd, ddCfg.common, /*withMethod=*/true);

  BenchConfig benchCfg;
  CLI::App* benchCmd =
      app.add_subcommand("bench", "Timing grid for the exact engine");
  benchCmd->add_option("--dims", benchCfg.dims, "dimensions to time")
      ->delimiter(',');
  benchCmd->add_option("--sizes", benchCfg.sizes, "sample sizes to time")
      ->delimiter(',');
  benchCmd->add_option("--reps", benchCfg.reps, "instances per (d, n) cell")
      ->check(CLI::PositiveNumber);
  addCommonOptions(*benchCmd, benchCfg.common, /*withMethod=*/true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (depthCmd->parsed()) return runDepth(depthCfg);
    if (checkCmd->parsed()) return runCheck(checkCfg);
    if (pcaCmd->parsed()) return runPca(pcaCfg);
    if (ddCmd->parsed()) return runDdplot(ddCfg);
    if (benchCmd->parsed()) return runBench(benchCfg);
  } catch (const deepcore::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const deepcore::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const deepcore::DepthError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
