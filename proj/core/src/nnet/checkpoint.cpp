// Copyright 2026 The finimg Authors
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

#include "finimg/nnet/checkpoint.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "finimg/error.hpp"

namespace finimg::nnet {

namespace {

constexpr const char* kMagic = "finimg-checkpoint";
constexpr int kVersion = 1;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

const char* activation_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::relu: return "relu";
    case ActivationKind::linear: return "linear";
    case ActivationKind::tanh: return "tanh";
    case ActivationKind::sigmoid: return "sigmoid";
  }
  return "?";
}

struct LayerWriter {
  std::ostream& os;
  void operator()(const DenseSpec& s) const { os << "dense " << s.units; }
  void operator()(const Conv1DSpec& s) const {
    os << "conv1d " << s.filters << ' ' << s.kernel << ' ' << (s.same_padding ? 1 : 0);
  }
  void operator()(const Conv2DSpec& s) const {
    os << "conv2d " << s.filters << ' ' << s.kernel_h << ' ' << s.kernel_w << ' ' << (s.same_padding ? 1 : 0);
  }
  void operator()(const MaxPoolSpec& s) const { os << "maxpool " << s.window; }
  void operator()(const DropoutSpec& s) const { os << "dropout " << hex(s.rate); }
  void operator()(const ActivationSpec& s) const { os << "activation " << activation_name(s.kind); }
  void operator()(const FlattenSpec&) const { os << "flatten"; }
  void operator()(const SoftmaxOutputSpec& s) const { os << "softmax " << s.classes; }
};

void check_token(const std::string& token, const char* what) {
  if (token.empty() || token.find_first_of(" \t\r\n") != std::string::npos)
    fail(Errc::invalid_argument, std::string(what) + " '" + token + "' must be a non-empty word");
}

class LineParser {
 public:
  LineParser(std::string line, std::size_t number) : in_(std::move(line)), number_(number) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) error("unexpected end of line");
    return w;
  }
  long long integer() {
    const std::string w = word();
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(w.c_str(), &end, 10);
    if (errno != 0 || *end != '\0') error("bad integer '" + w + "'");
    return v;
  }
  std::size_t count() {
    const long long v = integer();
    if (v < 0) error("negative count");
    return static_cast<std::size_t>(v);
  }
  double real() {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (*end != '\0' || w.empty()) error("bad number '" + w + "'");
    return v;
  }
  std::string rest() {
    std::string r;
    std::getline(in_ >> std::ws, r);
    return r;
  }
  void done() {
    std::string extra;
    if (in_ >> extra) error("trailing content '" + extra + "'");
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail(Errc::parse, "checkpoint line " + std::to_string(number_) + ": " + msg);
  }

 private:
  std::istringstream in_;
  std::size_t number_;
};

Shape read_shape(LineParser& p) {
  const auto rank = p.count();
  Shape s(rank);
  for (auto& d : s) d = p.count();
  return s;
}

LayerSpec read_layer(LineParser& p) {
  const std::string kind = p.word();
  auto flag = [&] {
    const auto v = p.integer();
    if (v != 0 && v != 1) p.error("padding flag must be 0 or 1");
    return v == 1;
  };
  auto i32 = [&] { return static_cast<int>(p.integer()); };
  if (kind == "dense") return DenseSpec{i32()};
  if (kind == "conv1d") {
    Conv1DSpec s;
    s.filters = i32();
    s.kernel = i32();
    s.same_padding = flag();
    return s;
  }
  if (kind == "conv2d") {
    Conv2DSpec s;
    s.filters = i32();
    s.kernel_h = i32();
    s.kernel_w = i32();
    s.same_padding = flag();
    return s;
  }
  if (kind == "maxpool") return MaxPoolSpec{i32()};
  if (kind == "dropout") return DropoutSpec{p.real()};
  if (kind == "activation") {
    const std::string a = p.word();
    for (auto k : {ActivationKind::relu, ActivationKind::linear, ActivationKind::tanh, ActivationKind::sigmoid})
      if (a == activation_name(k)) return ActivationSpec{k};
    p.error("unknown activation '" + a + "'");
  }
  if (kind == "flatten") return FlattenSpec{};
  if (kind == "softmax") return SoftmaxOutputSpec{i32()};
  p.error("unknown layer kind '" + kind + "'");
}

}  // namespace

Checkpoint make_checkpoint(const TrainedNetwork& trained) {
  Checkpoint c;
  c.spec = trained.network.spec();
  for (const auto* p : trained.network.parameters()) c.parameters.push_back(*p);
  c.history = trained.history;
  c.seed = trained.seed;
  return c;
}

TrainedNetwork restore(const Checkpoint& checkpoint) {
  TrainedNetwork t{Network(checkpoint.spec), checkpoint.history, checkpoint.seed};
  auto params = t.network.parameters();
  if (params.size() != checkpoint.parameters.size())
    fail(Errc::shape_mismatch, "checkpoint has " + std::to_string(checkpoint.parameters.size()) +
                                   " parameter tensors, network needs " + std::to_string(params.size()));
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k]->shape() != checkpoint.parameters[k].shape())
      fail(Errc::shape_mismatch, "parameter " + std::to_string(k) + " has shape " +
                                     shape_string(checkpoint.parameters[k].shape()) + ", expected " +
                                     shape_string(params[k]->shape()));
    *params[k] = checkpoint.parameters[k];
  }
  return t;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  std::ostringstream os;
  os << kMagic << ' ' << kVersion << '\n';
  os << "seed " << c.seed << '\n';
  for (const auto& [k, v] : c.metadata) {
    check_token(k, "metadata key");
    if (v.find_first_of("\r\n") != std::string::npos)
      fail(Errc::invalid_argument, "metadata value for '" + k + "' spans lines");
    os << "meta " << k << ' ' << v << '\n';
  }
  os << "input " << c.spec.input_shape.size();
  for (auto d : c.spec.input_shape) os << ' ' << d;
  os << '\n';
  for (const auto& l : c.spec.layers) {
    os << "layer ";
    std::visit(LayerWriter{os}, l);
    os << '\n';
  }
  os << "history " << c.history.size();
  for (double v : c.history) os << ' ' << hex(v);
  os << '\n';
  for (const auto& [name, values] : c.arrays) {
    check_token(name, "array name");
    os << "array " << name << ' ' << values.size();
    for (double v : values) os << ' ' << hex(v);
    os << '\n';
  }
  for (const auto& p : c.parameters) {
    os << "param " << p.rank();
    for (auto d : p.shape()) os << ' ' << d;
    for (double v : p.values()) os << ' ' << hex(v);
    os << '\n';
  }
  os << "end\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot write checkpoint " + path.string());
  const std::string text = os.str();
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(Errc::io, "failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open checkpoint " + path.string());
  Checkpoint c;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  bool ended = false;
  bool has_input = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (ended) LineParser(line, number).error("content after end");
    LineParser p(line, number);
    const std::string tag = p.word();
    if (!header) {
      if (tag != kMagic) p.error("not a finimg checkpoint");
      if (p.integer() != kVersion) p.error("unsupported checkpoint version");
      header = true;
    } else if (tag == "seed") {
      const std::string w = p.word();
      char* end = nullptr;
      c.seed = std::strtoull(w.c_str(), &end, 10);
      if (*end != '\0') p.error("bad seed");
    } else if (tag == "meta") {
      const std::string key = p.word();
      c.metadata[key] = p.rest();
      continue;
    } else if (tag == "input") {
      c.spec.input_shape = read_shape(p);
      has_input = true;
    } else if (tag == "layer") {
      c.spec.layers.push_back(read_layer(p));
    } else if (tag == "history") {
      c.history.resize(p.count());
      for (auto& v : c.history) v = p.real();
    } else if (tag == "array") {
      const std::string name = p.word();
      auto& values = c.arrays[name];
      values.resize(p.count());
      for (auto& v : values) v = p.real();
    } else if (tag == "param") {
      Tensor t(read_shape(p));
      for (auto& v : t.values()) v = p.real();
      c.parameters.push_back(std::move(t));
    } else if (tag == "end") {
      ended = true;
    } else {
      p.error("unknown record '" + tag + "'");
    }
    p.done();
  }
  if (!header) fail(Errc::parse, "checkpoint " + path.string() + " is empty");
  if (!ended) fail(Errc::parse, "checkpoint " + path.string() + " is truncated");
  if (!has_input) fail(Errc::parse, "checkpoint has no input shape");
  return c;
}

}  // namespace finimg::nnet
