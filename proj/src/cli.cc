// Copyright 2026 The Layerwise Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "layerwise/cli.h"

#include <cmath>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "layerwise/io.h"
#include "layerwise/random.h"

namespace layerwise::cli {

namespace fs = std::filesystem;
using io::Json;

Network GenerateNetwork(const std::vector<std::size_t>& dims, double scale, std::uint64_t seed) {
  if (dims.size() < 3) {
    throw InvalidArgument("need at least 3 dims (input, hidden..., output) for depth >= 2");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw InvalidArgument("dims must be >= 1");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("scale must be > 0");

  std::mt19937_64 rng(MixSeed(seed, 0));
  std::vector<Matrix> layers;
  for (std::size_t i = 1; i < dims.size(); ++i) {
    std::vector<double> e(dims[i] * dims[i - 1]);
    for (double& v : e) v = UniformReal(rng, -scale, scale);
    layers.emplace_back(dims[i], dims[i - 1], std::move(e));
  }
  return Network(std::move(layers));
}

RemarkResult ComputeRemark(double R, double delta, double g, std::size_t k) {
  RemarkResult r{R, delta, g, k, 0.0, 0.0};
  r.M = ComputeM(R, delta, g, k);
  r.T = Amplification(g, k);
  return r;
}

namespace {

template <typename Fn>
auto InStage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

E2eRun RunEndToEnd(const E2eOptions& options) {
  if (!(options.delta > 0.0) || !std::isfinite(options.delta)) {
    throw InvalidArgument("delta must be > 0: layerwise steering assumes a positive tolerance");
  }
  if (!(options.R_margin >= 1.0)) throw InvalidArgument("R margin must be >= 1");

  Network f = InStage("gen", [&] {
    return GenerateNetwork(options.dims, options.weight_scale, MixSeed(options.seed, 100));
  });

  AuditConfig estimate_cfg;
  estimate_cfg.sample_count = options.estimate_samples;
  const std::uint64_t sample_seed = MixSeed(options.seed, 101);
  const double R = InStage("estimate", [&] {
    return EstimateOutputBound(f, estimate_cfg, sample_seed, options.R_margin);
  });
  // The demo input is one of the estimation samples, so ||F(x)|| <= R holds.
  Vector x = SampleInput(estimate_cfg.sampler, f.input_dim(), sample_seed, 0);

  SteeredNetwork fprime = InStage("transform", [&] {
    return Transform(f, TransformOptions{options.delta, R, options.g});
  });

  AuditConfig audit_cfg;
  audit_cfg.sample_count = options.audit_samples;
  AuditReport audit = InStage("audit", [&] {
    return AuditEquivalence(f, fprime.net(), audit_cfg, MixSeed(options.seed, 102));
  });

  const Vector honest = InStage("eval", [&] { return Forward(f, x); });
  Vector z = honest;
  if (!options.honest_target) {
    std::mt19937_64 rng(MixSeed(options.seed, 103));
    for (double& v : z) v = UniformReal(rng, -R, R);
  }

  SteeringCertificate cert = InStage("steer", [&] { return Steer(fprime, x, z); });
  VerificationReport verification = InStage("verify", [&] {
    return Verify(fprime.net(), x, cert.transcript, options.delta);
  });

  DemoScenarioResult r;
  r.M = fprime.params().M;
  r.R = R;
  r.g = fprime.params().g;
  r.delta = options.delta;
  r.audit_passed = audit.passed;
  r.verifier_accepted = verification.accepted;
  r.achieved_output = cert.achieved;
  r.honest_output = honest;
  r.target = z;
  for (std::size_t j = 0; j < honest.size(); ++j) {
    r.steering_gap = std::max(r.steering_gap, std::fabs(cert.achieved[j] - honest[j]));
  }
  r.target_error = cert.target_error;
  r.max_residual = LinfNorm(verification.residuals);

  return E2eRun{std::move(r),     std::move(f),     std::move(fprime),
                std::move(x),     std::move(cert),  std::move(audit),
                std::move(verification)};
}

bool NonComposable(const DemoScenarioResult& r) {
  return r.audit_passed && r.verifier_accepted && r.steering_gap > 0.0;
}

namespace {

Json ToJson(const DemoScenarioResult& r) {
  Json j;
  j["M"] = r.M;
  j["R"] = r.R;
  j["g"] = r.g;
  j["delta"] = r.delta;
  j["audit_passed"] = r.audit_passed;
  j["verifier_accepted"] = r.verifier_accepted;
  j["achieved_output"] = io::ToJson(r.achieved_output);
  j["honest_output"] = io::ToJson(r.honest_output);
  j["target"] = io::ToJson(r.target);
  j["steering_gap"] = r.steering_gap;
  j["target_error"] = r.target_error;
  j["max_residual"] = r.max_residual;
  return j;
}

struct Globals {
  std::uint64_t seed = 0;
  std::string output_dir;

  fs::path Resolve(const std::string& p) const {
    if (output_dir.empty() || fs::path(p).is_absolute()) return p;
    return fs::path(output_dir) / p;
  }
};

// Writes to a file when a path is given, else to `out`.
void Emit(const Json& j, const std::string& path, const Globals& globals, std::ostream& out) {
  if (path.empty()) {
    out << io::Dump(j);
  } else {
    io::WriteJsonFile(globals.Resolve(path), j);
  }
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layerwise approximate verification: trigger-channel steering toolkit",
               "layerwise"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for every randomized step");
  app.add_option("--output-dir", globals.output_dir,
                 "Directory for relative output paths and e2e artifacts");

  // gen
  std::vector<std::size_t> gen_dims;
  double gen_scale = 1.0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a random dense ReLU network");
  gen->add_option("--dims", gen_dims, "Layer dims, e.g. 2,3,1")->delimiter(',')->required();
  gen->add_option("--scale", gen_scale, "Entries uniform in [-scale, scale)");
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

  // transform
  std::string tr_network, tr_out, tr_meta;
  double tr_delta = 0.0, tr_R = 0.0;
  std::optional<double> tr_g;
  auto* transform = app.add_subcommand("transform", "Build the trigger-channel network F'");
  transform->add_option("--network", tr_network)->required();
  transform->add_option("--delta", tr_delta, "Verifier tolerance")->required();
  transform->add_option("--R", tr_R, "Output bound")->required();
  transform->add_option("--g", tr_g, "Trigger amplification (default: weight bound)");
  transform->add_option("--out", tr_out, "F' output file")->required();
  transform->add_option("--meta", tr_meta, "Block metadata output file")->required();

  // steer
  std::string st_network, st_meta, st_input, st_target, st_out;
  auto* steer = app.add_subcommand("steer", "Emit a delta-consistent transcript hitting a target");
  steer->add_option("--network", st_network)->required();
  steer->add_option("--meta", st_meta)->required();
  steer->add_option("--input", st_input)->required();
  steer->add_option("--target", st_target)->required();
  steer->add_option("--out", st_out, "Transcript output file")->required();

  // verify
  std::string vf_network, vf_input, vf_transcript;
  double vf_delta = 0.0;
  auto* verify = app.add_subcommand("verify", "Layerwise delta-consistency check");
  verify->add_option("--network", vf_network)->required();
  verify->add_option("--input", vf_input)->required();
  verify->add_option("--transcript", vf_transcript)->required();
  verify->add_option("--delta", vf_delta)->required();

  // eval / trace
  std::string ev_network, ev_input, ev_out;
  auto* eval = app.add_subcommand("eval", "Exact forward evaluation");
  eval->add_option("--network", ev_network)->required();
  eval->add_option("--input", ev_input)->required();
  eval->add_option("--out", ev_out);
  auto* trace = app.add_subcommand("trace", "Honest transcript");
  trace->add_option("--network", ev_network)->required();
  trace->add_option("--input", ev_input)->required();
  trace->add_option("--out", ev_out);

  // audit
  std::string au_a, au_b, au_corpus;
  std::size_t au_samples = 10000;
  std::optional<double> au_tolerance;
  unsigned au_threads = 0;
  auto* audit = app.add_subcommand("audit", "Black-box functional equivalence audit");
  audit->add_option("--a", au_a)->required();
  audit->add_option("--b", au_b)->required();
  audit->add_option("--samples", au_samples);
  audit->add_option("--corpus", au_corpus, "Newline-delimited JSON input vectors");
  audit->add_option("--tolerance", au_tolerance, "Compare within tolerance instead of exactly");
  audit->add_option("--threads", au_threads);

  // bound
  std::string bd_network;
  double bd_delta = 0.0;
  auto* bound = app.add_subcommand("bound", "Worst-case output drift under delta-checks");
  bound->add_option("--network", bd_network)->required();
  bound->add_option("--delta", bd_delta)->required();

  // demo-remark
  double dr_R = 20.0, dr_delta = 1e-3, dr_g = 2.0;
  std::size_t dr_k = 20;
  auto* demo = app.add_subcommand("demo-remark", "Steering weight for R=20, delta=1e-3, g=2, k=20");
  demo->add_option("--R", dr_R);
  demo->add_option("--delta", dr_delta);
  demo->add_option("--g", dr_g);
  demo->add_option("--k", dr_k);

  // e2e
  E2eOptions e2e_opts;
  auto* e2e = app.add_subcommand("e2e", "Audit-passing, verifier-accepted, steered inference");
  e2e->add_option("--delta", e2e_opts.delta);
  e2e->add_option("--R-margin", e2e_opts.R_margin);
  e2e->add_option("--g", e2e_opts.g);
  e2e->add_option("--samples", e2e_opts.audit_samples);
  e2e->add_flag("--honest-target", e2e_opts.honest_target);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*gen) {
      Emit(io::ToJson(GenerateNetwork(gen_dims, gen_scale, globals.seed)), gen_out, globals, out);
      return kOk;
    }

    if (*transform) {
      const Network f = io::NetworkFromJson(io::ReadJsonFile(tr_network));
      const SteeredNetwork sn = Transform(f, TransformOptions{tr_delta, tr_R, tr_g});
      if (sn.params().g <= 1.0) {
        err << "warning: g = " << sn.params().g << " <= 1, trigger channel does not amplify\n";
      }
      io::WriteJsonFile(globals.Resolve(tr_out), io::ToJson(sn.net()));
      io::WriteJsonFile(globals.Resolve(tr_meta), io::MetaToJson(sn));
      out << io::Dump(io::MetaToJson(sn));
      return kOk;
    }

    if (*steer) {
      const SteeredNetwork sn = io::SteeredNetworkFromJson(io::ReadJsonFile(st_network),
                                                           io::ReadJsonFile(st_meta));
      const Vector x = io::VectorFromJson(io::ReadJsonFile(st_input));
      const Vector z = io::VectorFromJson(io::ReadJsonFile(st_target));
      const SteeringCertificate cert = Steer(sn, x, z);
      io::WriteJsonFile(globals.Resolve(st_out), io::ToJson(cert.transcript));
      const std::vector<double> residuals = ResidualProfile(sn.net(), cert.transcript);
      Json summary;
      summary["target_error"] = cert.target_error;
      summary["layer1_residual"] = residuals.front();
      summary["achieved"] = io::ToJson(cert.achieved);
      summary["u_plus"] = io::ToJson(cert.u_plus);
      summary["u_minus"] = io::ToJson(cert.u_minus);
      out << io::Dump(summary);
      return kOk;
    }

    if (*verify) {
      const Network net = io::NetworkFromJson(io::ReadJsonFile(vf_network));
      const Vector x = io::VectorFromJson(io::ReadJsonFile(vf_input));
      const Transcript t = io::TranscriptFromJson(io::ReadJsonFile(vf_transcript));
      const VerificationReport report = Verify(net, x, t, vf_delta);
      out << io::Dump(io::ToJson(report));
      return report.accepted ? kOk : kSemanticFailure;
    }

    if (*eval || *trace) {
      const Network net = io::NetworkFromJson(io::ReadJsonFile(ev_network));
      const Vector x = io::VectorFromJson(io::ReadJsonFile(ev_input));
      Emit(*eval ? io::ToJson(Forward(net, x)) : io::ToJson(ForwardTrace(net, x)), ev_out,
           globals, out);
      return kOk;
    }

    if (*audit) {
      const Network a = io::NetworkFromJson(io::ReadJsonFile(au_a));
      const Network b = io::NetworkFromJson(io::ReadJsonFile(au_b));
      AuditConfig cfg;
      cfg.sample_count = au_samples;
      cfg.threads = au_threads;
      if (!au_corpus.empty()) cfg.sampler = InputSampler::Corpus(io::ReadNdjsonVectors(au_corpus));
      if (au_tolerance) cfg.equality = EqualityMode::Tolerance(*au_tolerance);
      const AuditReport report = AuditEquivalence(a, b, cfg, globals.seed);
      out << io::Dump(io::ToJson(report));
      return report.passed ? kOk : kSemanticFailure;
    }

    if (*bound) {
      const Network net = io::NetworkFromJson(io::ReadJsonFile(bd_network));
      Json j;
      j["delta"] = bd_delta;
      j["reach_bound"] = LipschitzReachBound(net, bd_delta);
      out << io::Dump(j);
      return kOk;
    }

    if (*demo) {
      const RemarkResult r = ComputeRemark(dr_R, dr_delta, dr_g, dr_k);
      const bool defaults = demo->count("--R") + demo->count("--delta") + demo->count("--g") +
                                demo->count("--k") ==
                            0;
      Json j;
      j["R"] = r.R;
      j["delta"] = r.delta;
      j["g"] = r.g;
      j["k"] = r.k;
      j["T"] = r.T;
      j["M"] = r.M;
      if (defaults) {
        const bool in_range = r.M >= 0.15 && r.M <= 0.16;
        j["M_in_expected_range"] = in_range;
        out << io::Dump(j);
        return in_range ? kOk : kSemanticFailure;
      }
      out << io::Dump(j);
      return kOk;
    }

    if (*e2e) {
      e2e_opts.seed = globals.seed;
      const E2eRun run = RunEndToEnd(e2e_opts);
      if (!globals.output_dir.empty()) {
        const fs::path dir(globals.output_dir);
        io::WriteJsonFile(dir / "f.json", io::ToJson(run.f));
        io::WriteJsonFile(dir / "fprime.json", io::ToJson(run.fprime.net()));
        io::WriteJsonFile(dir / "meta.json", io::MetaToJson(run.fprime));
        io::WriteJsonFile(dir / "x.json", io::ToJson(run.input));
        io::WriteJsonFile(dir / "z.json", io::ToJson(run.result.target));
        io::WriteJsonFile(dir / "transcript.json", io::ToJson(run.certificate.transcript));
        io::WriteJsonFile(dir / "result.json", ToJson(run.result));
      }
      out << io::Dump(ToJson(run.result));
      const bool ok = e2e_opts.honest_target
                          ? run.result.audit_passed && run.result.verifier_accepted
                          : NonComposable(run.result);
      return ok ? kOk : kSemanticFailure;
    }
  } catch (const StageError& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticFailure;
  } catch (const TargetOutOfRange& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticFailure;
  } catch (const OutputBoundViolated& e) {
    err << "error: " << e.what() << "\n";
    return kSemanticFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace layerwise::cli
