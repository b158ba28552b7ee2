#include "qnn/serialize.hpp"

#include <fstream>

namespace qnn {

using nlohmann::json;

namespace {

json neuron_to_json(const Neuron& n) {
  if (const auto* q = std::get_if<QuadraticNeuron>(&n)) {
    return {{"kind", "quadratic"}, {"w_r", q->w_r}, {"b_r", q->b_r}, {"w_g", q->w_g},
            {"b_g", q->b_g},       {"w_b", q->w_b}, {"c", q->c}};
  }
  if (const auto* c = std::get_if<ConventionalNeuron>(&n)) {
    return {{"kind", "conventional"}, {"w", c->w}, {"b", c->b}};
  }
  return {{"kind", "passthrough"}, {"source", std::get<Passthrough>(n).source}};
}

Neuron neuron_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "quadratic") {
    QuadraticNeuron q;
    j.at("w_r").get_to(q.w_r);
    j.at("b_r").get_to(q.b_r);
    j.at("w_g").get_to(q.w_g);
    j.at("b_g").get_to(q.b_g);
    j.at("w_b").get_to(q.w_b);
    j.at("c").get_to(q.c);
    return q;
  }
  if (kind == "conventional") {
    ConventionalNeuron c;
    j.at("w").get_to(c.w);
    j.at("b").get_to(c.b);
    return c;
  }
  if (kind == "passthrough") return Passthrough{j.at("source").get<std::size_t>()};
  throw InvalidInput("unknown neuron kind '" + kind + "'");
}

}  // namespace

json to_json(const NetworkSpec& net) {
  json layers = json::array();
  for (const auto& l : net.layers) {
    json neurons = json::array();
    for (const auto& n : l.neurons) neurons.push_back(neuron_to_json(n));
    layers.push_back({{"activation", l.activation == Activation::relu ? "relu" : "identity"},
                      {"neurons", std::move(neurons)}});
  }
  json shortcuts = json::array();
  for (const auto& s : net.shortcuts) {
    shortcuts.push_back({{"from", {s.from.layer, s.from.neuron}},
                         {"to", {s.to.layer, s.to.neuron}},
                         {"weight", s.weight},
                         {"trainable", s.trainable}});
  }
  json masks = json::array();
  for (bool m : net.masks) masks.push_back(m);
  return {{"input_dim", net.input_dim},
          {"layers", std::move(layers)},
          {"shortcuts", std::move(shortcuts)},
          {"masks", std::move(masks)}};
}

NetworkSpec network_from_json(const json& j) {
  NetworkSpec net;
  try {
    j.at("input_dim").get_to(net.input_dim);
    for (const auto& lj : j.at("layers")) {
      Layer layer;
      const auto act = lj.at("activation").get<std::string>();
      if (act == "relu") {
        layer.activation = Activation::relu;
      } else if (act == "identity") {
        layer.activation = Activation::identity;
      } else {
        throw InvalidInput("unknown activation '" + act + "'");
      }
      for (const auto& nj : lj.at("neurons")) layer.neurons.push_back(neuron_from_json(nj));
      net.layers.push_back(std::move(layer));
    }
    if (j.contains("shortcuts")) {
      for (const auto& sj : j.at("shortcuts")) {
        Shortcut s;
        s.from = {sj.at("from").at(0).get<std::size_t>(), sj.at("from").at(1).get<std::size_t>()};
        s.to = {sj.at("to").at(0).get<std::size_t>(), sj.at("to").at(1).get<std::size_t>()};
        sj.at("weight").get_to(s.weight);
        s.trainable = sj.value("trainable", true);
        net.shortcuts.push_back(s);
      }
    }
    if (j.contains("masks")) {
      for (const auto& m : j.at("masks")) net.masks.push_back(m.get<bool>());
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed network document: ") + e.what());
  }
  validate(net);
  return net;
}

json to_json(const Polynomial& p) { return {{"coeffs", p.coeffs}}; }

Polynomial polynomial_from_json(const json& j) {
  try {
    return Polynomial{j.at("coeffs").get<std::vector<double>>()};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed polynomial document: ") + e.what());
  }
}

json to_json(const FactoredForm& ff) {
  json quads = json::array();
  for (const auto& q : ff.quadratic_factors) {
    quads.push_back({{"a", q.a}, {"b", q.b}, {"real_pair", q.real_pair}});
  }
  return {{"scale", ff.scale},
          {"linear_roots", ff.linear_roots},
          {"quadratic_factors", std::move(quads)},
          {"degree", ff.degree()}};
}

FactoredForm factored_form_from_json(const json& j) {
  FactoredForm ff;
  try {
    j.at("scale").get_to(ff.scale);
    j.at("linear_roots").get_to(ff.linear_roots);
    for (const auto& q : j.at("quadratic_factors")) {
      ff.quadratic_factors.push_back(
          {q.at("a").get<double>(), q.at("b").get<double>(), q.value("real_pair", false)});
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed factored form document: ") + e.what());
  }
  validate(ff);
  return ff;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return json::parse(in);
}

}  // namespace qnn
