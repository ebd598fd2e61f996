#include "causkit/json_io.hpp"

#include <fstream>
#include <sstream>

#include "causkit/backend.hpp"
#include "causkit/error.hpp"

namespace causkit {

using nlohmann::json;

json process_to_json(const Process& f) {
  json j;
  j["backend"] = to_string(f.backend());
  json wires = json::array();
  for (const auto& s : f.outs()) wires.push_back({{"name", s.label}, {"dim", s.dim}, {"role", "out"}});
  for (const auto& s : f.ins()) wires.push_back({{"name", s.label}, {"dim", s.dim}, {"role", "in"}});
  j["wires"] = wires;
  json data = json::array();
  if (f.backend() == Backend::Cpm) {
    Eigen::MatrixXcd choi = choi_matrix(f);
    for (Eigen::Index r = 0; r < choi.rows(); ++r)
      for (Eigen::Index c = 0; c < choi.cols(); ++c)
        data.push_back(json::array({choi(r, c).real(), choi(r, c).imag()}));
  } else if (f.backend() == Backend::Rel) {
    for (const auto& x : f.data()) data.push_back(x.real() != 0.0 ? 1 : 0);
  } else {
    for (const auto& x : f.data()) data.push_back(x.real());
  }
  j["data"] = data;
  return j;
}

Process process_from_json(const json& j) {
  try {
    Backend b = backend_from_string(j.at("backend").get<std::string>());
    std::vector<System> outs, ins;
    for (const auto& w : j.at("wires")) {
      System s{w.at("name").get<std::string>(), w.at("dim").get<int>()};
      auto role = w.at("role").get<std::string>();
      if (role == "out")
        outs.push_back(s);
      else if (role == "in")
        ins.push_back(s);
      else
        throw CausError(ErrorKind::InvalidData, "wire role must be 'in' or 'out'");
    }
    const auto& data = j.at("data");
    if (!data.is_array()) throw CausError(ErrorKind::InvalidData, "data must be an array");
    if (b == Backend::Cpm) {
      std::size_t n = 1;
      for (const auto& s : outs) n *= static_cast<std::size_t>(s.dim);
      for (const auto& s : ins) n *= static_cast<std::size_t>(s.dim);
      if (data.size() != n * n)
        throw CausError(ErrorKind::ShapeMismatch, "cpm data must hold the full Choi matrix");
      auto nn = static_cast<Eigen::Index>(n);
      Eigen::MatrixXcd choi(nn, nn);
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < nn; ++r)
        for (Eigen::Index c = 0; c < nn; ++c, ++k) {
          const auto& e = data[k];
          choi(r, c) = e.is_array() ? Complex{e.at(0).get<double>(), e.at(1).get<double>()}
                                    : Complex{e.get<double>(), 0.0};
        }
      return from_choi(std::move(outs), std::move(ins), choi);
    }
    std::vector<Complex> v;
    v.reserve(data.size());
    for (const auto& e : data) {
      if (e.is_boolean())
        v.emplace_back(e.get<bool>() ? 1.0 : 0.0);
      else
        v.emplace_back(e.get<double>());
    }
    return Process(b, std::move(outs), std::move(ins), std::move(v));
  } catch (const json::exception& e) {
    throw CausError(ErrorKind::InvalidData, e.what());
  }
}

std::string dump_process(const Process& f) { return process_to_json(f).dump(1); }

Process load_process_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CausError(ErrorKind::InvalidData, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CausError(ErrorKind::InvalidData, path + ": " + e.what());
  }
  return process_from_json(j);
}

void save_process_file(const Process& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CausError(ErrorKind::InvalidData, "cannot write '" + path + "'");
  out << dump_process(f) << "\n";
}

}  // namespace causkit
