#include "shapprop/random_model.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "shapprop/errors.hpp"
#include "shapprop/rng.hpp"

namespace shapprop {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_positive(const std::string& s, const std::string& what) {
  if (s.empty()) throw ShapeError("illegal arch: empty " + what);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || v == 0) {
    throw ShapeError("illegal arch: bad " + what + " \"" + s + "\"");
  }
  return static_cast<std::size_t>(v);
}

Shape parse_dims(const std::string& s, const std::string& what) {
  Shape dims;
  for (const std::string& part : split(s, 'x')) dims.push_back(parse_positive(part, what));
  return dims;
}

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void fill_normal(Tensor& t, Rng& rng, double variance) {
  const double stddev = std::sqrt(variance);
  for (double& v : t.values()) v = rng.normal(0.0, stddev);
}

}  // namespace

Model generate_random_model(std::uint64_t seed, const std::string& arch) {
  const std::vector<std::string> tokens = split(arch, '-');
  if (tokens.size() < 2) throw ShapeError("illegal arch: need an input shape and a layer");

  Model model;
  model.input_shape = parse_dims(tokens[0], "input shape");
  Shape cur = model.input_shape;
  Rng rng(seed);

  for (std::size_t t = 1; t < tokens.size(); ++t) {
    const std::string& tok = tokens[t];
    LayerSpec layer;
    if (is_integer_token(tok)) {
      const std::size_t out = parse_positive(tok, "dense width");
      if (cur.size() != 1) {
        throw ShapeError("illegal arch: dense layer after non-flat activation " +
                         shape_to_string(cur) + " (insert \"flatten\")");
      }
      layer.kind = LayerKind::Dense;
      layer.weights = Tensor(Shape{out, cur[0]});
      layer.bias = Tensor(Shape{out});
      fill_normal(layer.weights, rng, 2.0 / static_cast<double>(cur[0]));
      fill_normal(layer.bias, rng, 0.1);
    } else if (tok == "relu") {
      layer.kind = LayerKind::Relu;
    } else if (tok == "flatten") {
      layer.kind = LayerKind::Flatten;
    } else if (tok == "gap") {
      layer.kind = LayerKind::GlobalAvgPool;
    } else if (tok.rfind("conv1d:", 0) == 0) {
      const Shape dims = parse_dims(tok.substr(7), "conv1d descriptor");
      if (dims.size() != 2 || cur.size() != 2) {
        throw ShapeError("illegal arch: conv1d:KWxCOUT needs a [w, cin] activation");
      }
      layer.kind = LayerKind::Conv1D;
      layer.weights = Tensor(Shape{dims[0], cur[1], dims[1]});
      layer.bias = Tensor(Shape{dims[1]});
      fill_normal(layer.weights, rng, 2.0 / static_cast<double>(dims[0] * cur[1]));
      fill_normal(layer.bias, rng, 0.1);
    } else if (tok.rfind("conv2d:", 0) == 0) {
      const Shape dims = parse_dims(tok.substr(7), "conv2d descriptor");
      if (dims.size() != 3 || cur.size() != 3) {
        throw ShapeError("illegal arch: conv2d:KHxKWxCOUT needs a [h, w, cin] activation");
      }
      layer.kind = LayerKind::Conv2D;
      layer.weights = Tensor(Shape{dims[0], dims[1], cur[2], dims[2]});
      layer.bias = Tensor(Shape{dims[2]});
      fill_normal(layer.weights, rng, 2.0 / static_cast<double>(dims[0] * dims[1] * cur[2]));
      fill_normal(layer.bias, rng, 0.1);
    } else if (tok.rfind("maxpool:", 0) == 0) {
      layer.kind = LayerKind::MaxPool;
      layer.window = parse_dims(tok.substr(8), "maxpool window");
    } else if (tok.rfind("avgpool:", 0) == 0) {
      layer.kind = LayerKind::AvgPool;
      layer.window = parse_dims(tok.substr(8), "avgpool window");
    } else {
      throw ShapeError("illegal arch: unknown token \"" + tok + "\"");
    }
    cur = infer_output_shape(layer, cur);
    model.layers.push_back(std::move(layer));
  }

  model.validate();
  return model;
}

}  // namespace shapprop
