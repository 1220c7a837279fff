// config.hpp -- JSON run configuration for the command line tool.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "ctpi/engine.hpp"
#include "ctpi/observables.hpp"

namespace ctpi::cli {

// Unit system of the config file.  "natural" reads energies and times as
// hbar = k_B = 1 quantities; "wavenumber" reads Hamiltonians and bath
// frequencies in cm^-1, temperatures in K and times in ps.
enum class UnitSystem { Natural, Wavenumber };

struct OutputConfig {
  std::string directory = "out";
};

struct ObservableConfig {
  std::string a = "sigma_z";
  std::string b = "sigma_z";
  std::string projector = "projector_0";
  std::optional<double> plateau_time;
  std::string window = "hann";
  int zero_pad = 4;
  std::string negative_times = "mirror";  // mirror | direct
};

struct RunConfig {
  UnitSystem units = UnitSystem::Natural;
  SystemSpec system;
  std::map<std::string, Matrix> operators;  // named, after unit conversion
  std::vector<bath::BathSpec> baths;
  double beta = 1.0;
  int n_steps = 30;
  double t_max = 0;
  int n_times = 0;
  tn::TruncationPolicy truncation;
  QuadratureSettings quadrature;
  tn::AbsorbSide absorb = tn::AbsorbSide::Left;
  tn::ScheduleOrder schedule = tn::ScheduleOrder::MiddleOut;
  ObservableConfig observable;
  OutputConfig output;

  Matrix named_operator(const std::string& name) const;
  CorrelationRequest to_request() const;
};

// Parses and validates a config file.  Throws ConfigError with the JSON
// path of the offending field.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace ctpi::cli
