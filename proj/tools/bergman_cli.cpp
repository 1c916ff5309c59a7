// Experiment runner for the collar/cusp Bergman models, built entirely on the
// C interface in bergman.h.  Every subcommand is a thin adapter: the numbers
// in the output are the library's results verbatim.
//
// Output is deterministic: byte-identical across repeated runs and across
// --threads settings (cells are computed into preassigned slots and merged in
// configuration order).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bergman.h"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// small helpers

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json xr_json(bgm_xreal x) {
  json o;
  o["sign"] = x.sign;
  o["logmag"] = x.sign == 0 ? 0.0 : x.logmag;
  if (x.sign == 0)
    o["decimal"] = 0.0;
  else if (std::fabs(x.logmag) < 700.0)
    o["decimal"] = bgm_xr_to_double(x);
  return o;
}

[[noreturn]] void fail_usage(const std::string& msg) {
  throw CLI::ValidationError(msg);
}

std::vector<double> parse_list_d(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string tok = s.substr(pos, comma - pos);
    if (tok.empty()) fail_usage("empty entry in list: " + s);
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) fail_usage("bad number: " + tok);
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.empty()) fail_usage("empty list");
  return out;
}

std::vector<int> parse_list_i(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list_d(s)) {
    if (v != std::floor(v)) fail_usage("expected integer list: " + s);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::pair<int, int> parse_range_i(const std::string& s) {
  const std::size_t dots = s.find("..", 1);  // allow a leading minus sign
  if (dots == std::string::npos) {
    const int v = std::stoi(s);
    return {v, v};
  }
  const int lo = std::stoi(s.substr(0, dots));
  const int hi = std::stoi(s.substr(dots + 2));
  if (lo > hi) fail_usage("range lo > hi: " + s);
  return {lo, hi};
}

std::pair<double, double> parse_range_d(const std::string& s) {
  const std::size_t dots = s.find("..", 1);
  if (dots == std::string::npos) fail_usage("expected lo..hi: " + s);
  const double lo = std::stod(s.substr(0, dots));
  const double hi = std::stod(s.substr(dots + 2));
  if (!(lo < hi)) fail_usage("range lo >= hi: " + s);
  return {lo, hi};
}

void check_status(bgm_status st, const std::string& what) {
  if (st != BGM_OK)
    throw std::runtime_error(what + ": " + bgm_status_name(st) + " (" + bgm_last_error() + ")");
}

// ---------------------------------------------------------------------------
// shared options and output emission

struct CommonOpts {
  std::string epsilon_list = "1e-3";
  std::string k_list = "3";
  std::string a_range = "1..6";
  std::string tau_range;
  int samples = 9;
  double rel_tol = 1e-12;
  std::string format = "csv";
  std::string out_path;
  int threads = 1;

  std::vector<double> epsilons() const { return parse_list_d(epsilon_list); }
  std::vector<int> ks() const { return parse_list_i(k_list); }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--epsilon", o.epsilon_list, "comma-separated epsilon values");
  cmd->add_option("--k", o.k_list, "comma-separated bundle parameters k");
  cmd->add_option("--a", o.a_range, "Fourier index range lo..hi");
  cmd->add_option("--samples", o.samples, "grid samples per cell");
  cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
  cmd->add_option("--threads", o.threads, "worker threads for sweep cells")
      ->check(CLI::PositiveNumber);
}

struct Output {
  json config = json::object();
  std::vector<json> rows;
  std::vector<json> failures;
};

void csv_flatten(const json& row, std::vector<std::string>* keys,
                 std::vector<std::string>* cells) {
  for (const auto& [key, value] : row.items()) {
    if (value.is_object()) {  // extended-range number: sign, logmag, decimal
      if (keys) {
        keys->push_back(key + "_sign");
        keys->push_back(key + "_logmag");
        keys->push_back(key + "_decimal");
      }
      if (cells) {
        cells->push_back(std::to_string(value["sign"].get<int>()));
        cells->push_back(fmt17(value["logmag"].get<double>()));
        cells->push_back(value.contains("decimal") ? fmt17(value["decimal"].get<double>())
                                                   : std::string());
      }
    } else {
      if (keys) keys->push_back(key);
      if (cells) {
        if (value.is_string())
          cells->push_back(value.get<std::string>());
        else if (value.is_boolean())
          cells->push_back(value.get<bool>() ? "true" : "false");
        else if (value.is_number_integer())
          cells->push_back(std::to_string(value.get<long long>()));
        else
          cells->push_back(fmt17(value.get<double>()));
      }
    }
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

int emit(const Output& out, const CommonOpts& opts) {
  std::string text;
  if (opts.format == "json") {
    json doc;
    doc["config"] = out.config;
    doc["rows"] = json::array();
    for (const auto& r : out.rows) doc["rows"].push_back(r);
    doc["failures"] = json::array();
    for (const auto& f : out.failures) doc["failures"].push_back(f);
    text = doc.dump(2);
    text += '\n';
  } else {
    if (!out.rows.empty()) {
      std::vector<std::string> keys;
      csv_flatten(out.rows.front(), &keys, nullptr);
      for (std::size_t i = 0; i < keys.size(); ++i)
        text += (i ? "," : "") + csv_escape(keys[i]);
      text += '\n';
      for (const auto& row : out.rows) {
        std::vector<std::string> cells;
        csv_flatten(row, nullptr, &cells);
        for (std::size_t i = 0; i < cells.size(); ++i)
          text += (i ? "," : "") + csv_escape(cells[i]);
        text += '\n';
      }
    }
    for (const auto& f : out.failures)
      std::cerr << "failure: " << f.dump() << "\n";
  }
  if (opts.out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream file(opts.out_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << opts.out_path << "\n";
      return 2;
    }
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
  return out.failures.empty() ? 0 : 1;
}

// config echo; deliberately excludes --threads and --out so that output is
// byte-identical across parallelism settings
json config_echo(const std::string& command, const CommonOpts& o,
                 const std::vector<std::string>& fields) {
  json cfg;
  cfg["command"] = command;
  for (const std::string& f : fields) {
    if (f == "epsilon") {
      cfg["epsilon"] = o.epsilons();
    } else if (f == "k") {
      cfg["k"] = o.ks();
    } else if (f == "a") {
      const auto [lo, hi] = parse_range_i(o.a_range);
      cfg["a"] = {lo, hi};
    } else if (f == "samples") {
      cfg["samples"] = o.samples;
    }
  }
  cfg["rel_tol"] = o.rel_tol;
  cfg["format"] = o.format;
  return cfg;
}

// Deterministic parallel map: cell i writes slot i only.
struct CellResult {
  std::vector<json> rows;
  std::vector<json> failures;
};

template <typename F>
void run_cells(int threads, int n, std::vector<CellResult>& slots, F&& cell) {
  slots.resize(static_cast<std::size_t>(n));
  auto work = [&](int i) {
    try {
      cell(i, slots[static_cast<std::size_t>(i)]);
    } catch (const std::exception& e) {
      json f;
      f["cell"] = i;
      f["reason"] = e.what();
      slots[static_cast<std::size_t>(i)].failures.push_back(std::move(f));
    }
  };
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        int i;
        while ((i = next.fetch_add(1)) < n) work(i);
      });
    for (auto& th : pool) th.join();
  }
}

void merge_cells(const std::vector<CellResult>& slots, Output& out) {
  for (const auto& s : slots) {
    out.rows.insert(out.rows.end(), s.rows.begin(), s.rows.end());
    out.failures.insert(out.failures.end(), s.failures.begin(), s.failures.end());
  }
}

struct CollarHandle {
  bgm_collar* c = nullptr;
  CollarHandle(double eps, int k, int cutoff, double rel_tol) {
    check_status(bgm_collar_create(eps, k, cutoff, rel_tol, &c), "collar create");
  }
  ~CollarHandle() { bgm_collar_destroy(c); }
  CollarHandle(const CollarHandle&) = delete;
  CollarHandle& operator=(const CollarHandle&) = delete;
};

// ---------------------------------------------------------------------------
// subcommands

int cmd_norms(const CommonOpts& o, const std::string& model) {
  Output out;
  out.config = config_echo("norms", o, {"epsilon", "k", "a"});
  out.config["model"] = model;
  const auto [a_lo, a_hi] = parse_range_i(o.a_range);
  const auto ks = o.ks();

  if (model == "punctured") {
    if (a_lo < 1) fail_usage("punctured norms need a >= 1");
    std::vector<CellResult> slots;
    run_cells(o.threads, static_cast<int>(ks.size()), slots, [&](int i, CellResult& slot) {
      const int k = ks[static_cast<std::size_t>(i)];
      for (int a = a_lo; a <= a_hi; ++a) {
        bgm_xreal exact, quad;
        check_status(bgm_punctured_norm_exact(k, a, &exact), "norm_exact");
        check_status(bgm_punctured_norm_quad(k, a, o.rel_tol, &quad), "norm_quad");
        const double rel = std::fabs(std::expm1(quad.logmag - exact.logmag));
        const bool match = rel <= 10.0 * o.rel_tol;
        json row;
        row["model"] = "punctured";
        row["k"] = k;
        row["a"] = a;
        row["exact"] = xr_json(exact);
        row["quad_logmag"] = quad.logmag;
        row["rel_dev"] = rel;
        row["match"] = match;
        slot.rows.push_back(std::move(row));
        if (!match) {
          json f;
          f["row"] = "k=" + std::to_string(k) + " a=" + std::to_string(a);
          f["reason"] = "quadrature does not match the closed form";
          slot.failures.push_back(std::move(f));
        }
      }
    });
    merge_cells(slots, out);
  } else if (model == "collar") {
    const auto epss = o.epsilons();
    const int cells = static_cast<int>(epss.size() * ks.size());
    std::vector<CellResult> slots;
    run_cells(o.threads, cells, slots, [&](int i, CellResult& slot) {
      const double eps = epss[static_cast<std::size_t>(i) / ks.size()];
      const int k = ks[static_cast<std::size_t>(i) % ks.size()];
      const int cutoff = std::max({4 * k, 8, std::abs(a_lo), std::abs(a_hi)});
      CollarHandle h(eps, k, cutoff, o.rel_tol);
      for (int a = a_lo; a <= a_hi; ++a) {
        bgm_xreal norm;
        bgm_laplace_result lr;
        check_status(bgm_collar_norm(h.c, a, &norm), "collar norm");
        check_status(bgm_collar_norm_laplace(h.c, a, &lr), "collar laplace");
        json row;
        row["model"] = "collar";
        row["epsilon"] = eps;
        row["k"] = k;
        row["a"] = a;
        row["norm"] = xr_json(norm);
        row["laplace_logmag"] = lr.estimate.logmag;
        row["laplace_ratio"] = std::exp(lr.estimate.logmag - norm.logmag);
        row["t_star"] = lr.t_star;
        slot.rows.push_back(std::move(row));
      }
    });
    merge_cells(slots, out);
  } else {
    fail_usage("unknown model: " + model);
  }
  return emit(out, o);
}

int cmd_laplace_audit(const CommonOpts& o) {
  Output out;
  out.config = config_echo("laplace-audit", o, {"k", "a"});
  const auto [a_lo, a_hi] = parse_range_i(o.a_range);
  if (a_lo < 1) fail_usage("laplace-audit needs a >= 1");
  const auto ks = o.ks();
  const double half_log2 = 0.5 * std::log(2.0);
  std::vector<CellResult> slots;
  run_cells(o.threads, static_cast<int>(ks.size()), slots, [&](int i, CellResult& slot) {
    const int k = ks[static_cast<std::size_t>(i)];
    for (int a = a_lo; a <= a_hi; ++a) {
      bgm_xreal exact, quad;
      bgm_laplace_result lr;
      check_status(bgm_punctured_norm_exact(k, a, &exact), "norm_exact");
      check_status(bgm_punctured_norm_quad(k, a, o.rel_tol, &quad), "norm_quad");
      check_status(bgm_punctured_norm_laplace(k, a, &lr), "norm_laplace");
      const double ratio = std::exp(lr.estimate.logmag - exact.logmag);
      // alongside the standard constant sqrt(2 pi/|g''|), report the variant
      // printed with sqrt(pi/(2 |g''|)) for comparison
      const double ratio_variant = ratio * std::exp(-half_log2);
      const bool pass = ratio >= 1.0 - 0.1 / k && ratio <= 1.0;
      json row;
      row["k"] = k;
      row["a"] = a;
      row["log_exact"] = exact.logmag;
      row["log_quad"] = quad.logmag;
      row["log_laplace"] = lr.estimate.logmag;
      row["log_laplace_halved_variant"] = lr.estimate.logmag - half_log2;
      row["ratio"] = ratio;
      row["ratio_halved_variant"] = ratio_variant;
      row["t_star"] = lr.t_star;
      row["window_halfwidth"] = lr.window_halfwidth;
      row["log_left_tail"] = lr.left_tail.sign == 0 ? 0.0 : lr.left_tail.logmag;
      row["log_right_tail"] = lr.right_tail.sign == 0 ? 0.0 : lr.right_tail.logmag;
      row["pass"] = pass;
      slot.rows.push_back(std::move(row));
      if (!pass) {
        json f;
        f["row"] = "k=" + std::to_string(k) + " a=" + std::to_string(a);
        f["reason"] = "laplace/exact ratio outside [1 - 0.1/k, 1]";
        slot.failures.push_back(std::move(f));
      }
    }
  });
  merge_cells(slots, out);
  return emit(out, o);
}

void push_top_weights(json& row, const int* idx, const bgm_xreal* w, int n) {
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < n; ++i)
    order.emplace_back(w[i].sign == 0 ? -1e308 : w[i].logmag, idx[i]);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  for (int j = 0; j < 3 && j < static_cast<int>(order.size()); ++j) {
    row["top" + std::to_string(j + 1) + "_a"] = order[static_cast<std::size_t>(j)].second;
    row["top" + std::to_string(j + 1) + "_w"] =
        std::exp(order[static_cast<std::size_t>(j)].first);
  }
}

int cmd_kernel(const CommonOpts& o, const std::string& model) {
  Output out;
  out.config = config_echo("kernel", o, {"epsilon", "k", "samples"});
  out.config["model"] = model;
  if (o.samples < 2) fail_usage("kernel needs --samples >= 2");
  const auto ks = o.ks();

  if (model == "punctured") {
    std::vector<CellResult> slots;
    run_cells(o.threads, static_cast<int>(ks.size()), slots, [&](int i, CellResult& slot) {
      const int k = ks[static_cast<std::size_t>(i)];
      double lo = 0.5 * k, hi = 3.0 * k;
      if (!o.tau_range.empty()) std::tie(lo, hi) = parse_range_d(o.tau_range);
      for (int s = 0; s < o.samples; ++s) {
        const double tau = lo + (hi - lo) * s / (o.samples - 1);
        int cutoff = 0;
        check_status(bgm_punctured_default_cutoff(k, tau, &cutoff), "default_cutoff");
        bgm_xreal rho;
        check_status(bgm_punctured_density(k, tau, cutoff, &rho), "density");
        std::vector<int> idx(static_cast<std::size_t>(cutoff));
        std::vector<double> w(static_cast<std::size_t>(cutoff));
        int n = 0;
        check_status(
            bgm_punctured_term_weights(k, tau, cutoff, idx.data(), w.data(), cutoff, &n),
            "term_weights");
        json row;
        row["model"] = "punctured";
        row["k"] = k;
        row["tau"] = tau;
        row["cutoff"] = cutoff;
        row["density"] = xr_json(rho);
        std::vector<std::pair<double, int>> order;
        for (int j = 0; j < n && j < cutoff; ++j) order.emplace_back(w[j], idx[j]);
        std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
          if (x.first != y.first) return x.first > y.first;
          return x.second < y.second;
        });
        for (int j = 0; j < 3 && j < static_cast<int>(order.size()); ++j) {
          row["top" + std::to_string(j + 1) + "_a"] = order[static_cast<std::size_t>(j)].second;
          row["top" + std::to_string(j + 1) + "_w"] = order[static_cast<std::size_t>(j)].first;
        }
        slot.rows.push_back(std::move(row));
      }
    });
    merge_cells(slots, out);
  } else if (model == "collar") {
    const auto epss = o.epsilons();
    const int cells = static_cast<int>(epss.size() * ks.size());
    std::vector<CellResult> slots;
    run_cells(o.threads, cells, slots, [&](int i, CellResult& slot) {
      const double eps = epss[static_cast<std::size_t>(i) / ks.size()];
      const int k = ks[static_cast<std::size_t>(i) % ks.size()];
      CollarHandle h(eps, k, 0, o.rel_tol);
      const double t0 = bgm_collar_bubble_t0(h.c);
      const int cap = 2 * bgm_collar_cutoff(h.c) + 1;
      std::vector<int> idx(static_cast<std::size_t>(cap));
      std::vector<bgm_xreal> w(static_cast<std::size_t>(cap));
      for (int s = 0; s < o.samples; ++s) {
        const double t = t0 * s / (o.samples - 1);
        bgm_xreal rho;
        check_status(bgm_collar_density(h.c, t, &rho), "collar density");
        int n = 0;
        check_status(bgm_collar_weights_at(h.c, t, idx.data(), w.data(), cap, &n),
                     "weights_at");
        json row;
        row["model"] = "collar";
        row["epsilon"] = eps;
        row["k"] = k;
        row["t"] = t;
        row["density"] = xr_json(rho);
        push_top_weights(row, idx.data(), w.data(), std::min(n, cap));
        slot.rows.push_back(std::move(row));
      }
    });
    merge_cells(slots, out);
  } else {
    fail_usage("unknown model: " + model);
  }
  return emit(out, o);
}

int cmd_collar_sweep(const CommonOpts& o) {
  Output out;
  out.config = config_echo("collar-sweep", o, {"epsilon", "k", "a"});
  const auto [a_lo, a_hi] = parse_range_i(o.a_range);
  const auto epss = o.epsilons();
  const auto ks = o.ks();
  const int cells = static_cast<int>(epss.size() * ks.size());
  std::vector<CellResult> slots;
  run_cells(o.threads, cells, slots, [&](int i, CellResult& slot) {
    const double eps = epss[static_cast<std::size_t>(i) / ks.size()];
    const int k = ks[static_cast<std::size_t>(i) % ks.size()];
    const int cutoff = std::max({4 * k, 8, std::abs(a_lo), std::abs(a_hi) + 1});
    CollarHandle h(eps, k, cutoff, o.rel_tol);
    const double pi = 3.14159265358979323846;
    for (int a = a_lo; a <= a_hi; ++a) {
      bgm_xreal norm;
      bgm_laplace_result lr;
      check_status(bgm_collar_norm(h.c, a, &norm), "collar norm");
      check_status(bgm_collar_norm_laplace(h.c, a, &lr), "collar laplace");
      json row;
      row["epsilon"] = eps;
      row["k"] = k;
      row["a"] = a;
      row["log_norm"] = norm.logmag;
      row["log_laplace"] = lr.estimate.logmag;
      row["laplace_ratio"] = std::exp(lr.estimate.logmag - norm.logmag);
      row["t_star"] = lr.t_star;
      // concentration window: sqrt(k) log k / |a|, or the curvature window
      // 3/(sqrt(2k) eps) at the geodesic index a = 0
      const double halfwidth = a != 0 ? std::sqrt(static_cast<double>(k)) * std::log(k) /
                                            std::abs(a)
                                      : 3.0 / (std::sqrt(2.0 * k) * eps);
      double outside = 0.0;
      check_status(bgm_collar_mass_outside(h.c, a, halfwidth, o.rel_tol, &outside),
                   "mass_outside");
      row["window_halfwidth"] = halfwidth;
      row["mass_outside_window"] = outside;
      if (a + 1 <= a_hi && a != 0 && a + 1 != 0) {
        bgm_xreal next;
        check_status(bgm_collar_norm(h.c, a + 1, &next), "collar norm");
        const double target = pi / eps + (2.0 * k + 1) *
                                             (std::log(std::fabs(static_cast<double>(a))) -
                                              std::log(std::fabs(a + 1.0)));
        row["ratio_dev_next"] = (next.logmag - norm.logmag) - target;
      }
      slot.rows.push_back(std::move(row));
    }
  });
  merge_cells(slots, out);
  return emit(out, o);
}

int cmd_cut_tail(const CommonOpts& o) {
  Output out;
  out.config = config_echo("cut-tail", o, {"epsilon", "k"});
  const auto epss = o.epsilons();
  const auto ks = o.ks();
  const int cells = static_cast<int>(epss.size() * ks.size());
  std::vector<CellResult> slots;
  run_cells(o.threads, cells, slots, [&](int i, CellResult& slot) {
    const double eps = epss[static_cast<std::size_t>(i) / ks.size()];
    const int k = ks[static_cast<std::size_t>(i) % ks.size()];
    CollarHandle h(eps, k, 0, o.rel_tol);
    bgm_cut_tail_report r;
    check_status(bgm_collar_cut_tail(h.c, &r), "cut_tail");
    json row;
    row["epsilon"] = eps;
    row["k"] = k;
    row["u_lo"] = r.u_lo;
    row["u_hi"] = r.u_hi;
    row["cosh_u_lo"] = std::cosh(r.u_lo);
    row["cosh_u_hi"] = std::cosh(r.u_hi);
    row["log_density_sup"] = r.density_sup.logmag;
    row["log_bound"] = r.bound.logmag;
    row["log_margin"] = r.bound.logmag - r.density_sup.logmag;
    row["pass"] = r.pass == 1;
    slot.rows.push_back(std::move(row));
    if (r.pass != 1) {
      json f;
      f["row"] = "epsilon=" + fmt17(eps) + " k=" + std::to_string(k);
      f["reason"] = "density sup exceeds the cut-tail bound";
      slot.failures.push_back(std::move(f));
    }
  });
  merge_cells(slots, out);
  return emit(out, o);
}

int cmd_bubble(const CommonOpts& o) {
  Output out;
  out.config = config_echo("bubble", o, {"epsilon", "k", "samples"});
  if (o.samples < 3) fail_usage("bubble needs --samples >= 3");
  const auto epss = o.epsilons();
  const auto ks = o.ks();
  const int cells = static_cast<int>(epss.size() * ks.size());
  std::vector<CellResult> slots;
  run_cells(o.threads, cells, slots, [&](int i, CellResult& slot) {
    const double eps = epss[static_cast<std::size_t>(i) / ks.size()];
    const int k = ks[static_cast<std::size_t>(i) % ks.size()];
    CollarHandle h(eps, k, 0, o.rel_tol);
    std::vector<bgm_profile_row> rows(static_cast<std::size_t>(o.samples));
    check_status(bgm_collar_bubble_profile(h.c, o.samples, rows.data()), "bubble_profile");
    const double hp = bgm_collar_half_period(h.c);
    for (const auto& r : rows) {
      json row;
      row["epsilon"] = eps;
      row["k"] = k;
      row["t"] = r.t;
      row["tau"] = hp - r.t;
      row["circle_length"] = xr_json(r.circle_length);
      row["reduced_logmag"] = r.reduced_coordinate.logmag;
      row["line_distance"] = r.line_distance;
      for (int j = 0; j < 3; ++j) {
        row["top" + std::to_string(j + 1) + "_a"] = r.top_a[j];
        row["top" + std::to_string(j + 1) + "_w"] = r.top_w[j];
      }
      slot.rows.push_back(std::move(row));
    }
  });
  merge_cells(slots, out);
  return emit(out, o);
}

int cmd_report_all(const CommonOpts& o) {
  Output out;
  out.config = config_echo("report-all", o, {});
  const int n = bgm_audit_criteria_count();
  std::vector<CellResult> slots;
  run_cells(o.threads, n, slots, [&](int i, CellResult& slot) {
    const int criterion = i + 1;
    bgm_audit* a = nullptr;
    check_status(bgm_audit_run(criterion, o.rel_tol, &a), "audit_run");
    const std::string name = bgm_audit_criterion_name(criterion);
    for (int r = 0; r < bgm_audit_row_count(a); ++r) {
      json row;
      row["criterion"] = criterion;
      row["name"] = name;
      row["check"] = bgm_audit_row_id(a, r);
      const bool pass = bgm_audit_row_pass(a, r) == 1;
      row["pass"] = pass;
      std::string values;
      json values_json = json::object();
      for (int v = 0; v < bgm_audit_row_value_count(a, r); ++v) {
        const std::string key = bgm_audit_row_value_key(a, r, v);
        const bgm_xreal value = bgm_audit_row_value(a, r, v);
        char buf[64];
        bgm_xr_format(value, buf, sizeof buf);
        if (!values.empty()) values += ";";
        values += key + "=" + buf;
        values_json[key] = xr_json(value);
      }
      row["values"] = values;
      row["note"] = bgm_audit_row_note(a, r);
      if (o.format == "json") row["values_detail"] = values_json;
      slot.rows.push_back(std::move(row));
      if (!pass) {
        json f;
        f["criterion"] = criterion;
        f["name"] = name;
        f["check"] = bgm_audit_row_id(a, r);
        f["reason"] = "check failed";
        slot.failures.push_back(std::move(f));
      }
    }
    bgm_audit_destroy(a);
  });
  merge_cells(slots, out);
  return emit(out, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collar and cusp Bergman-model experiment runner"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string model = "punctured";

  CLI::App* norms = app.add_subcommand("norms", "section norms, exact vs quadrature");
  norms->add_option("--model", model, "punctured or collar");
  add_common(norms, o);

  CLI::App* lap = app.add_subcommand("laplace-audit", "second-order estimates vs exact norms");
  add_common(lap, o);

  CLI::App* kernel = app.add_subcommand("kernel", "Bergman density profiles");
  kernel->add_option("--model", model, "punctured or collar");
  kernel->add_option("--tau", o.tau_range, "tau grid lo..hi (punctured)");
  add_common(kernel, o);

  CLI::App* sweep = app.add_subcommand("collar-sweep", "collar norms over a parameter grid");
  add_common(sweep, o);

  CLI::App* cut = app.add_subcommand("cut-tail", "sup-norm bound on the transition annulus");
  add_common(cut, o);

  CLI::App* bubble = app.add_subcommand("bubble", "degeneration profile of the embedding");
  add_common(bubble, o);

  CLI::App* report = app.add_subcommand("report-all", "run the full verification suite");
  add_common(report, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    if (norms->parsed()) return cmd_norms(o, model);
    if (lap->parsed()) return cmd_laplace_audit(o);
    if (kernel->parsed()) return cmd_kernel(o, model);
    if (sweep->parsed()) return cmd_collar_sweep(o);
    if (cut->parsed()) return cmd_cut_tail(o);
    if (bubble->parsed()) return cmd_bubble(o);
    if (report->parsed()) return cmd_report_all(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
