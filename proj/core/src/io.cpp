#include "exdesign/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace exdesign {

namespace {

using Json = nlohmann::ordered_json;

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("<document>", std::string("invalid JSON: ") + e.what());
  }
}

const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field, "expected an enclosing object");
  const auto it = j.find(field);
  if (it == j.end()) throw ParseError(field, "missing");
  return *it;
}

int require_int(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_number_integer()) throw ParseError(field, "expected an integer");
  return v.get<int>();
}

std::uint64_t require_u64(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ParseError(field, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string require_string(const Json& j, const std::string& field) {
  const Json& v = require(j, field);
  if (!v.is_string()) throw ParseError(field, "expected a string");
  return v.get<std::string>();
}

Json flat_row_major(const Eigen::MatrixXd& M) {
  Json array = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) array.push_back(M(i, j));
  return array;
}

Eigen::MatrixXd matrix_from_flat(const Json& value, int rows, int cols,
                                 const std::string& field) {
  if (!value.is_array()) throw ParseError(field, "expected an array");
  if (static_cast<int>(value.size()) != rows * cols)
    throw ParseError(field, "expected " + std::to_string(rows * cols) +
                                " entries, got " + std::to_string(value.size()));
  Eigen::MatrixXd M(rows, cols);
  int k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j, ++k) {
      if (!value[k].is_number()) throw ParseError(field, "expected numbers");
      M(i, j) = value[k].get<double>();
    }
  return M;
}

Json nested_rows(const Eigen::MatrixXd& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_array(const Json& value, const std::string& field) {
  if (!value.is_array()) throw ParseError(field, "expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) throw ParseError(field, "expected numbers");
    v(static_cast<Eigen::Index>(i)) = value[i].get<double>();
  }
  return v;
}

std::vector<Eigen::VectorXd> vector_sequence(const Json& value,
                                             const std::string& field) {
  if (!value.is_array()) throw ParseError(field, "expected an array of vectors");
  std::vector<Eigen::VectorXd> sequence;
  sequence.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    sequence.push_back(
        vector_from_array(value[i], field + "[" + std::to_string(i) + "]"));
  return sequence;
}

Json sequence_to_json(const std::vector<Eigen::VectorXd>& sequence) {
  Json array = Json::array();
  for (const auto& v : sequence) {
    Json entry = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) entry.push_back(v(i));
    array.push_back(std::move(entry));
  }
  return array;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

std::string to_json(const LtiSystem& sys) {
  Json j;
  j["n"] = sys.n();
  j["m"] = sys.m();
  j["A"] = flat_row_major(sys.A);
  j["B"] = flat_row_major(sys.B);
  return j.dump(2) + "\n";
}

LtiSystem system_from_json(const std::string& text) {
  const Json j = parse(text);
  const int n = require_int(j, "n");
  const int m = require_int(j, "m");
  if (n < 1) throw ParseError("n", "must be positive");
  if (m < 1) throw ParseError("m", "must be positive");
  return LtiSystem(matrix_from_flat(require(j, "A"), n, n, "A"),
                   matrix_from_flat(require(j, "B"), n, m, "B"));
}

std::string to_json(const Dataset& data) {
  Json j;
  j["T"] = data.T();
  j["inputs"] = sequence_to_json(data.inputs());
  j["states"] = sequence_to_json(data.states());
  return j.dump(2) + "\n";
}

Dataset dataset_from_json(const std::string& text) {
  const Json j = parse(text);
  const int T = require_int(j, "T");
  if (T < 1) throw ParseError("T", "must be positive");
  auto inputs = vector_sequence(require(j, "inputs"), "inputs");
  auto states = vector_sequence(require(j, "states"), "states");
  if (static_cast<int>(inputs.size()) != T)
    throw ParseError("inputs", "expected T = " + std::to_string(T) + " entries");
  if (static_cast<int>(states.size()) != T + 1)
    throw ParseError("states", "expected T + 1 = " + std::to_string(T + 1) + " entries");
  try {
    return Dataset(std::move(inputs), std::move(states));
  } catch (const std::invalid_argument& e) {
    throw ParseError("inputs", e.what());
  }
}

Dataset dataset_from_csv(const std::string& text, int m, int n) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        const double value = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(value);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw ParseError("row " + std::to_string(rows.size()), "non-numeric cell");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2)
    throw ParseError("rows", "need at least two data rows (one step)");

  const std::size_t T = rows.size() - 1;
  std::vector<Eigen::VectorXd> inputs, states;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& row = rows[t];
    const bool last = t == T;
    if (!last && static_cast<int>(row.size()) != m + n)
      throw ParseError("row " + std::to_string(t),
                       "expected " + std::to_string(m + n) + " columns, got " +
                           std::to_string(row.size()));
    if (last && static_cast<int>(row.size()) != n &&
        static_cast<int>(row.size()) != m + n)
      throw ParseError("row " + std::to_string(t),
                       "expected " + std::to_string(n) + " or " +
                           std::to_string(m + n) + " columns, got " +
                           std::to_string(row.size()));
    const int offset = static_cast<int>(row.size()) - n;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = row[offset + i];
    states.push_back(std::move(x));
    if (!last) {
      Eigen::VectorXd u(m);
      for (int i = 0; i < m; ++i) u(i) = row[i];
      inputs.push_back(std::move(u));
    }
  }
  return Dataset(std::move(inputs), std::move(states));
}

std::string to_json(const std::vector<Eigen::VectorXd>& input) {
  return sequence_to_json(input).dump(2) + "\n";
}

std::vector<Eigen::VectorXd> input_from_json(const std::string& text) {
  const Json j = parse(text);
  const Json& array = j.is_object() ? require(j, "inputs") : j;
  auto input = vector_sequence(array, "inputs");
  if (input.empty()) throw ParseError("inputs", "empty signal");
  return input;
}

std::string to_json(const Eigen::VectorXd& v) {
  Json array = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) array.push_back(v(i));
  return array.dump() + "\n";
}

Eigen::VectorXd vector_from_json(const std::string& text) {
  return vector_from_array(parse(text), "<document>");
}

std::string to_json(const GainCertificate& cert) {
  Json j;
  j["branch"] = to_string(cert.branch);
  j["K"] = nested_rows(cert.K);
  j["closed_loop_radius_on_data"] = cert.closed_loop_radius_on_data;
  if (cert.branch == GainBranch::FullRank) {
    j["Theta"] = nested_rows(cert.theta);
  } else {
    j["A_r"] = nested_rows(cert.A_r);
    j["B_r"] = nested_rows(cert.B_r);
    j["V"] = nested_rows(cert.V);
    j["K_r"] = nested_rows(cert.K_r);
  }
  return j.dump(2) + "\n";
}

std::string to_json(const OnlineRun& run) {
  Json j;
  j["T"] = run.length;
  Json steps = Json::array();
  for (const auto& record : run.trace) {
    Json step;
    step["t"] = record.t;
    step["branch"] = to_string(record.branch);
    if (record.input) {
      Json u = Json::array();
      for (Eigen::Index i = 0; i < record.input->size(); ++i)
        u.push_back((*record.input)(i));
      step["u"] = std::move(u);
    }
    if (record.xi && record.eta) {
      Json xi = Json::array(), eta = Json::array();
      for (Eigen::Index i = 0; i < record.xi->size(); ++i) xi.push_back((*record.xi)(i));
      for (Eigen::Index i = 0; i < record.eta->size(); ++i) eta.push_back((*record.eta)(i));
      step["xi"] = std::move(xi);
      step["eta"] = std::move(eta);
    }
    steps.push_back(std::move(step));
  }
  j["trace"] = std::move(steps);
  j["exit"] = Json{{"state_in_imXminus", run.exit_state_in_image},
                   {"image_product_condition", run.exit_product_condition}};
  j["dataset"] = Json::parse(to_json(run.dataset));
  return j.dump(2) + "\n";
}

std::string to_json(const CampaignSpec& spec) {
  Json j;
  j["version"] = 1;
  j["name"] = spec.name;
  j["theorem"] = spec.theorem;
  j["trials"] = spec.trials;
  j["dims"] = Json{{"n", Json::array({spec.n_range.lo, spec.n_range.hi})},
                   {"m", Json::array({spec.m_range.lo, spec.m_range.hi})}};
  j["seed"] = spec.seed;
  if (spec.trial_seed_override) j["trial_seed"] = *spec.trial_seed_override;
  return j.dump(2) + "\n";
}

CampaignSpec campaign_spec_from_json(const std::string& text) {
  const Json j = parse(text);
  CampaignSpec spec;
  spec.name = require_string(j, "name");
  spec.theorem = require_string(j, "theorem");
  spec.trials = require_int(j, "trials");
  if (spec.trials < 1) throw ParseError("trials", "must be positive");
  const Json& dims = require(j, "dims");
  const auto range = [&](const char* key) {
    const Json& v = require(dims, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
      throw ParseError(std::string("dims.") + key, "expected [lo, hi]");
    DimRange r{v[0].get<int>(), v[1].get<int>()};
    if (r.lo < 1 || r.hi < r.lo)
      throw ParseError(std::string("dims.") + key, "expected 1 <= lo <= hi");
    return r;
  };
  spec.n_range = range("n");
  spec.m_range = range("m");
  spec.seed = require_u64(j, "seed");
  if (j.contains("trial_seed")) spec.trial_seed_override = require_u64(j, "trial_seed");
  return spec;
}

std::string to_json(const CampaignReport& report) {
  Json j;
  j["version"] = 1;
  j["spec"] = Json::parse(to_json(report.spec));
  j["pass_count"] = report.pass_count;
  j["fail_count"] = report.fail_count;
  j["wall_time_ms"] = report.wall_time_ms;
  Json trials = Json::array();
  for (const auto& trial : report.trials) {
    Json t;
    t["index"] = trial.index;
    t["seed"] = trial.seed;
    t["n"] = trial.n;
    t["m"] = trial.m;
    t["class"] = trial.system_class;
    t["pass"] = trial.pass;
    t["detail"] = trial.detail;
    if (!trial.pass) t["reproduce"] = reproduction_command(report.spec, trial);
    trials.push_back(std::move(t));
  }
  j["trials"] = std::move(trials);
  return j.dump(2) + "\n";
}

std::string to_json(const Verdict& verdict) {
  Json j;
  j["informative"] = verdict.informative;
  Json conditions;
  for (const auto& [key, value] : verdict.conditions) conditions[key] = value;
  j["conditions"] = std::move(conditions);
  const auto rank_json = [](const RankReport& report) {
    Json r;
    r["rank"] = report.rank;
    Json sv = Json::array();
    for (Eigen::Index i = 0; i < report.singular_values.size(); ++i)
      sv.push_back(report.singular_values(i));
    r["singular_values"] = std::move(sv);
    r["tol_used"] = report.tol_used;
    return r;
  };
  j["rank_XU"] = rank_json(verdict.xu_rank);
  j["rank_X"] = rank_json(verdict.x_rank);
  if (verdict.identified) j["identified"] = Json::parse(to_json(*verdict.identified));
  if (verdict.gain) j["K"] = nested_rows(*verdict.gain);
  return j.dump(2) + "\n";
}

}  // namespace exdesign
