// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented.
// Usage: acceptance --work DIR [--epochs N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "eigenfeat/binary_io.hpp"
#include "eigenfeat/cnn/network.hpp"
#include "eigenfeat/cnn/ops.hpp"
#include "eigenfeat/cnn/train.hpp"
#include "eigenfeat/dataset.hpp"
#include "eigenfeat/error.hpp"
#include "eigenfeat/fingerprint.hpp"
#include "eigenfeat/gradient.hpp"
#include "eigenfeat/pgm.hpp"
#include "eigenfeat/rng.hpp"
#include "eigenfeat/runtime.hpp"
#include "eigenfeat/svd.hpp"
#include "eigenfeat/synth.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace eigenfeat;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDataSeed = 7;
const std::vector<std::uint64_t> kTrainSeeds = {1, 2, 3};

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::vector<std::pair<int, Outcome>> g_results;

void detail(const std::string& line) { std::printf("    %s\n", line.c_str()); std::fflush(stdout); }

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void report(int id, const std::string& name, Outcome o) {
  std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.summary.c_str());
  std::fflush(stdout);
  g_results.push_back({id, o});
}

/// Runs a criterion, turning an unexpected exception into a failure.
void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  try {
    report(id, name, body());
  } catch (const std::exception& e) {
    report(id, name, {false, std::string("exception: ") + e.what()});
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string order_string(const std::vector<std::size_t>& order) {
  std::string s;
  for (auto l : order) s += (s.empty() ? "" : ">") + std::to_string(l);
  return s;
}

template <typename F>
bool throws_code(ErrorCode expected, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == expected;
  }
  return false;
}

struct TrainedModel {
  cnn::TrainResult result;
  double seconds = 0.0;
};

/// Shared state built once: the synthetic dataset and the trained models.
struct Workbench {
  fs::path work;
  std::size_t epochs = 10;
  DatasetManifest raw_manifest;
  DatasetManifest gradient_manifest;
  std::vector<cnn::Sample> samples;
  std::vector<TrainedModel> full;  // one per training seed
  std::optional<TrainedModel> reduced;
  std::vector<GrayImage> held_out;  // preprocessed test images
  std::vector<std::size_t> held_out_labels;
};

cnn::TrainConfig train_config(const Workbench& wb, std::uint64_t seed, bool reduced) {
  cnn::TrainConfig t;
  t.epochs = wb.epochs;
  t.seed = seed;
  t.deterministic = true;
  if (reduced) t.batch_size = 32;
  return t;
}

TrainedModel train_model(const Workbench& wb, const cnn::NetworkConfig& net, const cnn::TrainConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  TrainedModel m{cnn::train(wb.samples, net, cfg), 0.0};
  m.seconds = seconds_since(t0);
  return m;
}

/// Fresh images that never enter training, preprocessed like the dataset.
void make_held_out(Workbench& wb) {
  const auto specs = default_class_specs();
  const double scale = *wb.gradient_manifest.gradient_scale;
  for (std::size_t label : {1, 2, 3}) {
    const ClassSpec& spec = specs[label - 1];
    const GrayImage raw = gen_field(spec, 64, derive_seed(kDataSeed, "heldout", {label}));
    GrayImage g = gradient_magnitude(gradient_sobel(raw));
    for (auto& v : g.pixels()) v = std::clamp(std::round(v * scale), 0.0, 255.0);
    wb.held_out.push_back(std::move(g));
    wb.held_out_labels.push_back(label);
  }
}

// 1 ------------------------------------------------------------------------------

Outcome classification(const Workbench& wb) {
  std::size_t ok = 0;
  bool fast = true;
  for (std::size_t i = 0; i < wb.full.size(); ++i) {
    const auto& m = wb.full[i];
    const double acc = m.result.final_validation.accuracy;
    ok += acc >= 0.95;
    fast = fast && m.seconds < 600.0;
    detail("seed " + std::to_string(kTrainSeeds[i]) + ": validation accuracy " + num(acc) + " after " +
           std::to_string(wb.epochs) + " epochs, " + num(m.seconds, 1) + " s");
  }
  return {ok >= 2 && fast && wb.epochs <= 30,
          std::to_string(ok) + "/3 seeds >= 0.95 within " + std::to_string(wb.epochs) + " epochs" +
              (fast ? ", each run < 10 min" : ", a run exceeded 10 min")};
}

// 2 ------------------------------------------------------------------------------

Outcome ordering(const Workbench& wb) {
  const OrderingReport r = verify_ordering(wb.raw_manifest, wb.work / "data", GradientMethod::sobel);
  for (const auto& c : r.classes)
    detail("class " + std::to_string(c.label) + ": mean |grad Y| " + num(c.mean) + " +- " + num(c.stddev) + " (n=" +
           std::to_string(c.count) + ")");
  double min_sep = 1e300;
  for (std::size_t a = 0; a < r.classes.size(); ++a)
    for (std::size_t b = a + 1; b < r.classes.size(); ++b)
      min_sep = std::min(min_sep, std::abs(r.classes[a].mean - r.classes[b].mean) /
                                      pooled_standard_error(r.classes[a], r.classes[b]));
  const bool gradient_ok = r.satisfies(expected_class_order(), 3.0);
  detail("gradient order " + order_string(r.order()) + ", smallest pairwise gap " + num(min_sep, 1) + " pooled SE");

  std::vector<const GrayImage*> images;
  std::vector<std::size_t> labels;
  for (const auto& s : wb.samples) {
    images.push_back(&s.image);
    labels.push_back(s.label + 1);
  }
  std::size_t ok = 0;
  for (std::size_t i = 0; i < wb.full.size(); ++i) {
    cnn::Network net(wb.full[i].result.checkpoint);
    const auto series = mean_activation_per_class(net, images, labels, cnn::relu_layer(net.config(), 2));
    std::string means;
    for (const auto& [label, mean] : series.class_means()) means += " " + std::to_string(label) + "=" + num(mean);
    const auto order = series.descending_order();
    ok += order == expected_class_order();
    detail("seed " + std::to_string(kTrainSeeds[i]) + ": ReLU 2 mean activation order " + order_string(order) + " (" +
           means.substr(1) + ")");
  }
  return {gradient_ok && ok >= 2, std::string("gradient order ") + (gradient_ok ? "3>2>4>1 with >= 3 SE gaps" : "not met") +
                                      ", activation order reproduced in " + std::to_string(ok) + "/3 seeds"};
}

// 3 ------------------------------------------------------------------------------

Outcome gradient_checks() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t failed_cases = 0, entries = 0, bad_entries = 0;
  double worst = 0.0;
  std::uint64_t seed = 1000;
  const auto cases = gradcheck::cases();
  for (const auto& c : cases) {
    const auto o = gradcheck::run_case(c, ++seed);
    entries += o.checked;
    bad_entries += o.failed;
    worst = std::max(worst, o.worst_relative);
    if (o.failed) {
      ++failed_cases;
      detail(c.name + ": " + std::to_string(o.failed) + " entries off, worst " + sci(o.worst_relative) + " at " +
             o.worst_where);
    }
  }
  const double t = seconds_since(t0);
  return {failed_cases == 0 && cases.size() == 20 && t < 60.0,
          std::to_string(cases.size()) + " configurations, " + std::to_string(entries) + " entries, " +
              std::to_string(bad_entries) + " outside rel 1e-4 / abs 1e-8, " + num(t, 2) + " s"};
}

// 4 ------------------------------------------------------------------------------

Outcome svd_oracles() {
  double worst_rec = 0.0, worst_orth = 0.0, worst_resid = 0.0;
  std::size_t checks = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(derive_seed(seed, "svd-acceptance"));
    const std::size_t m = 1 + rng.below(8);
    const std::size_t n = m + rng.below(17 - m);
    Matrix x(n, m);
    for (auto& v : x.values()) v = rng.normal();
    const SvdResult s = svd_via_gram(x);
    const std::size_t r = std::min(n, m);

    Matrix rec(n, m);
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) rec(i, j) += s.sigma[k] * s.u(i, k) * s.v(j, k);
    double diff = 0.0;
    for (std::size_t i = 0; i < rec.values().size(); ++i) diff += std::pow(rec.values()[i] - x.values()[i], 2);
    worst_rec = std::max(worst_rec, std::sqrt(diff) / x.frobenius_norm());

    for (const Matrix* q : {&s.u, &s.v})
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
          double d = 0.0;
          for (std::size_t i = 0; i < q->rows(); ++i) d += (*q)(i, a) * (*q)(i, b);
          worst_orth = std::max(worst_orth, std::abs(d - (a == b ? 1.0 : 0.0)));
        }

    for (std::size_t k = 1; k <= s.rank; ++k) {
      const Matrix t = truncate(s, k);
      double resid = 0.0, tail = 0.0;
      for (std::size_t i = 0; i < t.values().size(); ++i) resid += std::pow(x.values()[i] - t.values()[i], 2);
      for (std::size_t i = k; i < s.sigma.size(); ++i) tail += s.sigma[i] * s.sigma[i];
      // relative to ||X||_F^2 when the tail is empty (r = rank)
      const double denom = tail > 0.0 ? tail : x.frobenius_norm() * x.frobenius_norm();
      worst_resid = std::max(worst_resid, std::abs(resid - tail) / denom);
      ++checks;
    }
  }
  const bool pass = worst_rec < 1e-10 && worst_orth < 1e-10 && worst_resid < 1e-9;
  return {pass, "100 matrices up to 16x8: reconstruction " + sci(worst_rec) + ", orthonormality " + sci(worst_orth) +
                    ", residual identity " + sci(worst_resid) + " over " + std::to_string(checks) + " truncations"};
}

// 5 ------------------------------------------------------------------------------

Outcome layer_oracles() {
  double conv_worst = 0.0, pool_worst = 0.0, fc_worst = 0.0;
  Rng rng(derive_seed(5, "layer-oracles"));
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t c = 1 + rng.below(3), f = 1 + rng.below(4);
    const std::size_t k = 1 + 2 * rng.below(3);
    const std::size_t pad = rng.below(3), stride = 1 + rng.below(2);
    std::size_t h = k + rng.below(10), w = k + rng.below(10);
    h += (h + 2 * pad - k) % stride;
    w += (w + 2 * pad - k) % stride;
    const Tensor x = oracle::random_tensor(rng, {c, h, w});
    const Tensor wt = oracle::random_tensor(rng, {f, c, k, k});
    std::vector<double> b(f);
    for (auto& v : b) v = rng.uniform(-1.0, 1.0);
    const Tensor got = cnn::conv_forward(x, wt, b, pad, stride);
    const Tensor want = oracle::conv(x, wt, b, pad, stride);
    conv_worst = std::max(conv_worst, got.shape() == want.shape() ? oracle::max_abs_diff(got.values(), want.values()) : 1e300);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t size = 1 + rng.below(3), stride = 1 + rng.below(3);
    const Tensor x = oracle::random_tensor(rng, {1 + rng.below(4), size + rng.below(10), size + rng.below(10)});
    const Tensor got = cnn::maxpool_forward(x, size, stride);
    const Tensor want = oracle::maxpool(x, size, stride);
    pool_worst = std::max(pool_worst, got.shape() == want.shape() ? oracle::max_abs_diff(got.values(), want.values()) : 1e300);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t in = 1 + rng.below(40), out = 1 + rng.below(8);
    const Tensor v = oracle::random_tensor(rng, {in});
    const Tensor w = oracle::random_tensor(rng, {in, out});
    std::vector<double> b(out);
    for (auto& x : b) x = rng.uniform(-1.0, 1.0);
    fc_worst = std::max(fc_worst, oracle::max_abs_diff(cnn::fc_forward(v, w, b).values(), oracle::fc(v.storage(), w, b)));
  }
  return {conv_worst < 1e-12 && pool_worst < 1e-12 && fc_worst < 1e-12,
          "max |diff| over 100 cases each: conv " + sci(conv_worst) + ", maxpool " + sci(pool_worst) + ", fc " +
              sci(fc_worst)};
}

// 6 ------------------------------------------------------------------------------

Outcome robustness(const Workbench& wb) {
  const auto& full = wb.full[0].result.checkpoint;
  const auto& other = wb.full[1].result.checkpoint;
  const auto& reduced = wb.reduced->result.checkpoint;
  detail("reduced-capacity model: validation accuracy " + num(wb.reduced->result.final_validation.accuracy) + ", " +
         num(wb.reduced->seconds, 1) + " s");
  std::size_t reduced_ok = 0, seed_ok = 0, eigen_wins = 0;
  for (std::size_t i = 0; i < wb.held_out.size(); ++i) {
    const GrayImage& img = wb.held_out[i];
    const double r_reduced = robustness_compare(full, reduced, img, cnn::relu_layer(full.config, 2));
    const std::size_t layer = cnn::relu_layer(full.config, 2);
    const double r_seed = robustness_compare(full, other, img, layer);
    const double r_alpha = fingerprint_correlation(alpha_fingerprint(full, img, layer), alpha_fingerprint(other, img, layer));
    reduced_ok += r_reduced >= 0.7;
    seed_ok += r_seed >= 0.7;
    eigen_wins += r_seed > r_alpha;
    detail("image " + std::to_string(i + 1) + " (class " + std::to_string(wb.held_out_labels[i]) + "): full vs reduced r=" +
           num(r_reduced, 3) + ", eigen across seeds r=" + num(r_seed, 3) + ", alpha across seeds r=" + num(r_alpha, 3));
  }
  const bool pass = reduced_ok >= 2 && seed_ok == wb.held_out.size() && eigen_wins >= 2;
  return {pass, "full vs reduced r >= 0.7 on " + std::to_string(reduced_ok) + "/3, cross-seed eigen r >= 0.7 on " +
                    std::to_string(seed_ok) + "/3, eigen beats alpha on " + std::to_string(eigen_wins) + "/3"};
}

// 7 ------------------------------------------------------------------------------

Outcome geometry() {
  const cnn::NetworkConfig cfg = cnn::full_scale_config();
  const auto geo = cnn::trace_geometry(cfg);
  const cnn::Volume relu2 = geo[cnn::relu_layer(cfg, 2)];
  std::size_t fc = 0;
  for (std::size_t i = 0; i < cfg.layers.size(); ++i)
    if (std::holds_alternative<cnn::FullyConnected>(cfg.layers[i])) fc = i;
  const cnn::Volume fc_in = geo[fc - 1];
  const bool pass = relu2 == cnn::Volume{128, 131, 131} && fc_in == cnn::Volume{64, 2, 2};
  auto show = [](const cnn::Volume& v) {
    return std::to_string(v.height) + "x" + std::to_string(v.width) + "x" + std::to_string(v.channels);
  };
  return {pass, "ReLU 2 maps " + show(relu2) + ", fully connected input " + show(fc_in)};
}

// 8 ------------------------------------------------------------------------------

Outcome spectral_decay(const Workbench& wb) {
  const auto& ckpt = wb.full[0].result.checkpoint;
  std::size_t ok = 0;
  std::string ratios;
  for (const auto& img : wb.held_out) {
    const Fingerprint fp = eigen_fingerprint(ckpt, img, cnn::relu_layer(ckpt.config, 2));
    const double ratio = fp.spectrum.size() > 1 && fp.spectrum[1] > 0.0 ? fp.spectrum[0] / fp.spectrum[1] : 1e300;
    ok += ratio >= 2.0;
    ratios += (ratios.empty() ? "" : ", ") + num(ratio, 2);
  }
  return {ok >= 2, "sigma1/sigma2 at ReLU 2 on held-out images: " + ratios + " (" + std::to_string(ok) + "/3 >= 2)"};
}

// 9 ------------------------------------------------------------------------------

Outcome determinism(const Workbench& wb) {
  // dataset
  const fs::path second = wb.work / "data_repeat";
  fs::remove_all(second);
  const DatasetManifest again = gen_dataset(default_class_specs(), 100, 64, kDataSeed, second);
  bool data_same = read_file(wb.work / "data" / "manifest.json") == read_file(second / "manifest.json");
  for (const auto& e : again.entries) data_same = data_same && read_file(wb.work / "data" / e.path) == read_file(second / e.path);

  // checkpoint: a second full training run with the first seed
  const TrainedModel repeat = train_model(wb, cnn::desk_config(), train_config(wb, kTrainSeeds[0], false));
  const std::string a = cnn::serialize_checkpoint(wb.full[0].result.checkpoint);
  const std::string b = cnn::serialize_checkpoint(repeat.result.checkpoint);
  const bool ckpt_same = a == b && cnn::metrics_csv(wb.full[0].result.metrics) == cnn::metrics_csv(repeat.result.metrics);

  // fingerprint files written twice
  const auto& ckpt = wb.full[0].result.checkpoint;
  const std::size_t layer = cnn::relu_layer(ckpt.config, 2);
  save_fingerprint(eigen_fingerprint(ckpt, wb.held_out[0], layer), wb.work / "fp_a.fprt");
  save_fingerprint(eigen_fingerprint(cnn::Checkpoint(repeat.result.checkpoint), wb.held_out[0], layer), wb.work / "fp_b.fprt");
  const bool fp_same = read_file(wb.work / "fp_a.fprt") == read_file(wb.work / "fp_b.fprt");

  detail(std::string("dataset (") + std::to_string(again.entries.size()) + " images + manifest) " +
         (data_same ? "identical" : "DIFFERENT"));
  detail("checkpoint " + std::string(ckpt_same ? "identical" : "DIFFERENT") + " (digest " +
         wb.full[0].result.checkpoint.digest() + "), rerun " + num(repeat.seconds, 1) + " s");
  detail(std::string("fingerprint file ") + (fp_same ? "identical" : "DIFFERENT"));
  return {data_same && ckpt_same && fp_same, std::string("dataset, checkpoint and fingerprint bytes ") +
                                                 (data_same && ckpt_same && fp_same ? "identical across runs" : "differ")};
}

// 10 -----------------------------------------------------------------------------

Outcome round_trips(const Workbench& wb) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };

  // PGM
  Rng rng(derive_seed(10, "roundtrip"));
  const GrayImage img = oracle::random_image(rng, 23, 17);
  GrayImage integral = img;
  for (auto& v : integral.pixels()) v = std::round(v);
  for (auto mode : {PgmMode::binary, PgmMode::ascii}) {
    const std::string bytes = encode_pgm(integral, mode);
    check(parse_pgm(bytes) == integral, "pgm decode");
    check(encode_pgm(parse_pgm(bytes), mode) == bytes, "pgm re-encode");
  }
  const std::string p5 = encode_pgm(integral);
  check(throws_code(ErrorCode::truncated_payload, [&] { parse_pgm(p5.substr(0, p5.size() - 1)); }), "pgm truncation");
  check(throws_code(ErrorCode::malformed_header, [&] { parse_pgm("P9" + p5.substr(2)); }), "pgm magic");
  check(throws_code(ErrorCode::unsupported_maxval, [] { parse_pgm("P2\n1 1\n1000\n5\n"); }), "pgm maxval");

  // checkpoint
  const cnn::Checkpoint& ckpt = wb.full[0].result.checkpoint;
  const std::string c = cnn::serialize_checkpoint(ckpt);
  const fs::path cpath = wb.work / "roundtrip.mcnn";
  cnn::save_checkpoint(ckpt, cpath);
  const cnn::Checkpoint loaded = cnn::load_checkpoint(cpath);
  check(loaded == ckpt && cnn::serialize_checkpoint(loaded) == c && read_file(cpath) == c, "checkpoint round trip");
  std::string flipped = c;
  flipped[c.size() / 2] ^= 0x04;
  check(throws_code(ErrorCode::corrupt_payload, [&] { cnn::deserialize_checkpoint(flipped); }), "checkpoint bit flip");
  check(throws_code(ErrorCode::corrupt_payload, [&] { cnn::deserialize_checkpoint(c.substr(0, c.size() - 100)); }),
        "checkpoint truncation");
  std::string bumped = c;
  bumped[4] = static_cast<char>(bumped[4] + 1);
  check(throws_code(ErrorCode::version_mismatch, [&] { cnn::deserialize_checkpoint(bumped); }), "checkpoint version");

  // fingerprint
  const Fingerprint fp = eigen_fingerprint(ckpt, wb.held_out[0], cnn::relu_layer(ckpt.config, 2));
  const std::string f = serialize_fingerprint(fp);
  const fs::path fpath = wb.work / "roundtrip.fprt";
  save_fingerprint(fp, fpath);
  const Fingerprint fl = load_fingerprint(fpath);
  check(fl == fp && serialize_fingerprint(fl) == f && read_file(fpath) == f, "fingerprint round trip");
  std::string fflip = f;
  fflip[f.size() / 3] ^= 0x20;
  check(throws_code(ErrorCode::corrupt_payload, [&] { deserialize_fingerprint(fflip); }), "fingerprint bit flip");
  check(throws_code(ErrorCode::corrupt_payload, [&] { deserialize_fingerprint(f.substr(0, f.size() - 5)); }),
        "fingerprint truncation");
  std::string fbump = f;
  fbump[4] = static_cast<char>(fbump[4] + 1);
  check(throws_code(ErrorCode::version_mismatch, [&] { deserialize_fingerprint(fbump); }), "fingerprint version");

  std::string list;
  for (const auto& p : problems) list += (list.empty() ? "" : ", ") + p;
  return {problems.empty(), problems.empty() ? "PGM (P2/P5), MCNN and FPRT round-trip bit-exactly; corruption codes as designed"
                                             : "problems: " + list};
}

}  // namespace

int main(int argc, char** argv) {
  configure_allocator();
  setenv("EIGENFEAT_THREADS", "1", 1);

  Workbench wb;
  wb.work = fs::temp_directory_path() / "eigenfeat_acceptance";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--work") wb.work = argv[i + 1];
    else if (flag == "--epochs") wb.epochs = std::stoul(argv[i + 1]);
  }
  fs::remove_all(wb.work);
  fs::create_directories(wb.work);
  const auto t0 = std::chrono::steady_clock::now();

  // property suites that need no training
  criterion(3, "gradient check", gradient_checks);
  criterion(4, "SVD oracles", svd_oracles);
  criterion(5, "conv/pool/FC oracles", layer_oracles);
  criterion(7, "full-scale network geometry", geometry);

  // dataset and models
  bool ready = false;
  try {
    wb.raw_manifest = gen_dataset(default_class_specs(), 100, 64, kDataSeed, wb.work / "data");
    wb.gradient_manifest = preprocess_dataset(wb.raw_manifest, wb.work / "data", wb.work / "gradient", GradientMethod::sobel);
    wb.samples = load_samples(wb.gradient_manifest, wb.work / "gradient");
    make_held_out(wb);
    std::printf("  dataset: %zu images, gradient scale %.6g\n", wb.samples.size(), *wb.gradient_manifest.gradient_scale);
    for (auto seed : kTrainSeeds) {
      wb.full.push_back(train_model(wb, cnn::desk_config(), train_config(wb, seed, false)));
      std::printf("  trained seed %llu in %.1f s\n", static_cast<unsigned long long>(seed), wb.full.back().seconds);
      std::fflush(stdout);
    }
    wb.reduced = train_model(wb, cnn::reduced_capacity_config(cnn::desk_config()), train_config(wb, kTrainSeeds[0], true));
    std::printf("  trained reduced-capacity model in %.1f s\n", wb.reduced->seconds);
    ready = true;
  } catch (const std::exception& e) {
    std::printf("  setup failed: %s\n", e.what());
  }

  auto needs_models = [&](int id, const std::string& name, Outcome (*fn)(const Workbench&)) {
    if (!ready) {
      report(id, name, {false, "setup failed"});
      return;
    }
    criterion(id, name, [&] { return fn(wb); });
  };
  needs_models(1, "classification accuracy", classification);
  needs_models(2, "ordering reproduction", ordering);
  needs_models(6, "fingerprint robustness", robustness);
  needs_models(8, "spectral decay", spectral_decay);
  needs_models(9, "determinism", determinism);
  needs_models(10, "format round trips", round_trips);

  std::sort(g_results.begin(), g_results.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t passed = 0;
  std::printf("\nsummary (%.0f s):\n", seconds_since(t0));
  for (const auto& [id, o] : g_results) {
    passed += o.pass;
    std::printf("  [%d] %s\n", id, o.pass ? "PASS" : "FAIL");
  }
  std::printf("%zu/%zu criteria passed\n", passed, g_results.size());
  return passed == g_results.size() ? 0 : 1;
}
