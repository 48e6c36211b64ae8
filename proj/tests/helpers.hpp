#pragma once

#include <vector>

#include "relsim/model.hpp"

namespace relsim::testing {

/// Minimal model builder for hand-made fixtures.
struct ModelBuilder {
  NetworkModel model;

  ModelBuilder() {
    model.base_mva = 100.0;
  }

  ModelBuilder& area(Id id, double contact_min = 2.0, double response_min = 15.0) {
    model.areas.push_back({id, contact_min, response_min});
    return *this;
  }
  ModelBuilder& bus(Id id, Id area_id) {
    model.buses.push_back({id, area_id});
    return *this;
  }
  ModelBuilder& line(Id id, Id from, Id to, double x, double rating, double lambda_y = 0.0,
                     double mu_h = 0.1, double reclose_h = 1.0, Id responsible = 0) {
    model.lines.push_back({id, from, to, x, rating, lambda_y, mu_h, reclose_h, responsible});
    return *this;
  }
  ModelBuilder& gen(Id id, Id bus, double cap, int priority = 1, double lambda_y = 0.0,
                    double mu_h = 0.1) {
    model.generators.push_back({id, bus, cap, priority, lambda_y, mu_h});
    return *this;
  }
  ModelBuilder& load(Id id, Id bus, double peak) {
    model.loads.push_back({id, bus, peak});
    return *this;
  }
  NetworkModel build() {
    model.finalize();
    return model;
  }
};

/// Symmetric 3-bus triangle, unit area, equal reactances.
inline NetworkModel triangle_model(double x = 0.1, double rating = 1000.0) {
  ModelBuilder b;
  b.area(1);
  b.bus(1, 1).bus(2, 1).bus(3, 1);
  b.line(1, 1, 2, x, rating).line(2, 2, 3, x, rating).line(3, 1, 3, x, rating);
  b.gen(1, 1, 10000.0);
  b.load(1, 2, 10000.0);
  return b.build();
}

inline std::vector<bool> all_in_service(const NetworkModel& m) {
  return std::vector<bool>(m.n_lines(), true);
}

}  // namespace relsim::testing
