#include "retrainer/model_io.hpp"

#include "retrainer/errors.hpp"
#include "retrainer/nn/container.hpp"

namespace retrainer {

namespace {

void put_dense(nn::ModelContainer& c, const std::string& prefix, const nn::DenseLayer& layer) {
  c.add_tensor(prefix + ".w", layer.w);
  c.add_tensor(prefix + ".b", layer.b);
}

void get_dense(const nn::ModelContainer& c, const std::string& prefix, nn::DenseLayer& layer) {
  c.get_tensor(prefix + ".w", layer.w);
  c.get_tensor(prefix + ".b", layer.b);
}

void put_lstm(nn::ModelContainer& c, const std::string& prefix, const nn::LstmCell& cell) {
  c.add_tensor(prefix + ".wi", cell.wi);
  c.add_tensor(prefix + ".wf", cell.wf);
  c.add_tensor(prefix + ".wo", cell.wo);
  c.add_tensor(prefix + ".wg", cell.wg);
  c.add_tensor(prefix + ".bi", cell.bi);
  c.add_tensor(prefix + ".bf", cell.bf);
  c.add_tensor(prefix + ".bo", cell.bo);
  c.add_tensor(prefix + ".bg", cell.bg);
}

void get_lstm(const nn::ModelContainer& c, const std::string& prefix, nn::LstmCell& cell) {
  c.get_tensor(prefix + ".wi", cell.wi);
  c.get_tensor(prefix + ".wf", cell.wf);
  c.get_tensor(prefix + ".wo", cell.wo);
  c.get_tensor(prefix + ".wg", cell.wg);
  c.get_tensor(prefix + ".bi", cell.bi);
  c.get_tensor(prefix + ".bf", cell.bf);
  c.get_tensor(prefix + ".bo", cell.bo);
  c.get_tensor(prefix + ".bg", cell.bg);
  cell.hidden_size = cell.wi.rows;
  cell.input_size = cell.wi.cols - cell.wi.rows;
}

void check_kind(const nn::ModelContainer& c, const std::string& expected,
                const std::string& path) {
  const std::string kind = c.attrs.value("kind", "");
  if (kind != expected) {
    throw IoError("'" + path + "' holds a '" + kind + "' model, expected '" + expected + "'");
  }
}

nn::Activation activation_from_name(const std::string& name) {
  if (name == "sigmoid") return nn::Activation::Sigmoid;
  if (name == "relu") return nn::Activation::Relu;
  if (name == "tanh") return nn::Activation::Tanh;
  return nn::Activation::Linear;
}

std::string activation_name(nn::Activation act) {
  switch (act) {
    case nn::Activation::Sigmoid:
      return "sigmoid";
    case nn::Activation::Relu:
      return "relu";
    case nn::Activation::Tanh:
      return "tanh";
    case nn::Activation::Linear:
      return "linear";
  }
  return "linear";
}

}  // namespace

void save_vae(const genai::VaeModel& model, const std::string& path) {
  nn::ModelContainer c;
  c.attrs["kind"] = "vae";
  c.attrs["window_size"] = model.window_size;
  c.attrs["latent_dim"] = model.latent_dim;
  c.attrs["p_kstest"] = model.p_kstest;
  c.attrs["bounds_min"] = model.bounds.min;
  c.attrs["bounds_max"] = model.bounds.max;
  c.attrs["trained"] = model.trained;
  put_dense(c, "enc1", model.enc1);
  put_dense(c, "enc2", model.enc2);
  put_dense(c, "mu", model.mu_head);
  put_dense(c, "logvar", model.logvar_head);
  put_dense(c, "dec1", model.dec1);
  put_dense(c, "dec2", model.dec2);
  put_dense(c, "dec_out", model.dec_out);
  c.save(path);
}

genai::VaeModel load_vae(const std::string& path) {
  const auto c = nn::ModelContainer::load(path);
  check_kind(c, "vae", path);
  genai::VaeModel m;
  m.window_size = c.attrs.at("window_size").get<int>();
  m.latent_dim = c.attrs.at("latent_dim").get<int>();
  m.p_kstest = c.attrs.at("p_kstest").get<double>();
  m.bounds = {c.attrs.at("bounds_min").get<double>(), c.attrs.at("bounds_max").get<double>()};
  m.trained = c.attrs.at("trained").get<bool>();
  get_dense(c, "enc1", m.enc1);
  get_dense(c, "enc2", m.enc2);
  get_dense(c, "mu", m.mu_head);
  get_dense(c, "logvar", m.logvar_head);
  get_dense(c, "dec1", m.dec1);
  get_dense(c, "dec2", m.dec2);
  get_dense(c, "dec_out", m.dec_out);
  m.enc1.act = nn::Activation::Relu;
  m.enc2.act = nn::Activation::Relu;
  m.mu_head.act = nn::Activation::Linear;
  m.logvar_head.act = nn::Activation::Linear;
  m.dec1.act = nn::Activation::Relu;
  m.dec2.act = nn::Activation::Relu;
  m.dec_out.act = nn::Activation::Sigmoid;
  return m;
}

void save_gan(const genai::GanModel& model, const std::string& path) {
  nn::ModelContainer c;
  c.attrs["kind"] = "gan";
  c.attrs["window_size"] = model.window_size;
  c.attrs["p_kstest"] = model.p_kstest;
  c.attrs["d_score_low"] = model.d_score.low;
  c.attrs["d_score_high"] = model.d_score.high;
  c.attrs["bounds_min"] = model.bounds.min;
  c.attrs["bounds_max"] = model.bounds.max;
  c.attrs["trained"] = model.trained;
  put_lstm(c, "gen_lstm", model.gen_lstm);
  put_dense(c, "gen_fc1", model.gen_fc1);
  put_dense(c, "gen_fc2", model.gen_fc2);
  put_dense(c, "gen_fc3", model.gen_fc3);
  put_dense(c, "disc1", model.disc1);
  put_dense(c, "disc2", model.disc2);
  put_dense(c, "disc3", model.disc3);
  c.save(path);
}

genai::GanModel load_gan(const std::string& path) {
  const auto c = nn::ModelContainer::load(path);
  check_kind(c, "gan", path);
  genai::GanModel m;
  m.window_size = c.attrs.at("window_size").get<int>();
  m.p_kstest = c.attrs.at("p_kstest").get<double>();
  m.d_score = {c.attrs.at("d_score_low").get<double>(), c.attrs.at("d_score_high").get<double>()};
  m.bounds = {c.attrs.at("bounds_min").get<double>(), c.attrs.at("bounds_max").get<double>()};
  m.trained = c.attrs.at("trained").get<bool>();
  get_lstm(c, "gen_lstm", m.gen_lstm);
  get_dense(c, "gen_fc1", m.gen_fc1);
  get_dense(c, "gen_fc2", m.gen_fc2);
  get_dense(c, "gen_fc3", m.gen_fc3);
  get_dense(c, "disc1", m.disc1);
  get_dense(c, "disc2", m.disc2);
  get_dense(c, "disc3", m.disc3);
  m.gen_lstm.cell_act = nn::Activation::Tanh;
  m.gen_fc1.act = nn::Activation::Relu;
  m.gen_fc2.act = nn::Activation::Relu;
  m.gen_fc3.act = nn::Activation::Sigmoid;
  m.disc1.act = nn::Activation::Relu;
  m.disc2.act = nn::Activation::Relu;
  m.disc3.act = nn::Activation::Sigmoid;
  return m;
}

void save_forecaster(const forecast::Forecaster& model, const std::string& path) {
  nn::ModelContainer c;
  c.attrs["kind"] = "forecaster";
  c.attrs["lookback"] = model.lookback;
  c.attrs["num_layers"] = model.cells.size();
  c.attrs["cell_activation"] =
      activation_name(model.cells.empty() ? nn::Activation::Tanh : model.cells.front().cell_act);
  c.attrs["bounds_min"] = model.bounds.min;
  c.attrs["bounds_max"] = model.bounds.max;
  c.attrs["version"] = model.version;
  c.attrs["trained"] = model.trained;
  for (std::size_t l = 0; l < model.cells.size(); ++l) {
    put_lstm(c, "cell" + std::to_string(l), model.cells[l]);
  }
  put_dense(c, "head", model.head);
  c.save(path);
}

forecast::Forecaster load_forecaster(const std::string& path) {
  const auto c = nn::ModelContainer::load(path);
  check_kind(c, "forecaster", path);
  forecast::Forecaster m;
  m.lookback = c.attrs.at("lookback").get<int>();
  m.bounds = {c.attrs.at("bounds_min").get<double>(), c.attrs.at("bounds_max").get<double>()};
  m.version = c.attrs.at("version").get<std::uint64_t>();
  m.trained = c.attrs.at("trained").get<bool>();
  const auto layers = c.attrs.at("num_layers").get<std::size_t>();
  const auto act = activation_from_name(c.attrs.at("cell_activation").get<std::string>());
  m.cells.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    get_lstm(c, "cell" + std::to_string(l), m.cells[l]);
    m.cells[l].cell_act = act;
  }
  get_dense(c, "head", m.head);
  m.head.act = nn::Activation::Linear;
  return m;
}

}  // namespace retrainer
