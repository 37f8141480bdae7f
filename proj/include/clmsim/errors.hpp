#pragma once

#include <stdexcept>
#include <string>

namespace clmsim {

/// Base class for everything the simulator can throw on purpose.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Located error while reading a DYD record or case file.
struct ParseError : SimError {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : SimError(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

/// A component or composite-load initialization could not be completed.
struct InitError : SimError {
    std::string component;
    InitError(const std::string& component_, const std::string& msg)
        : SimError(component_ + ": " + msg), component(component_) {}
};

/// Network fixed-point iteration failed to converge.
struct ConvergenceError : SimError {
    double t = 0.0;
    int worst_bus = -1;
    double worst_dv = 0.0;
    ConvergenceError(double t_, int worst_bus_, double worst_dv_)
        : SimError("network solution diverged at t=" + std::to_string(t_) + " s, worst bus " +
                   std::to_string(worst_bus_) + " (|dV|=" + std::to_string(worst_dv_) + ")"),
          t(t_),
          worst_bus(worst_bus_),
          worst_dv(worst_dv_) {}
};

/// A derivative evaluation produced a non-finite value.
struct IntegrationError : SimError {
    std::string component;
    int state_index = -1;
    IntegrationError(const std::string& component_, int state_index_)
        : SimError("non-finite derivative in '" + component_ + "' at state index " +
                   std::to_string(state_index_)),
          component(component_),
          state_index(state_index_) {}
};

/// Bad network topology (singular matrix, unknown bus, ghost-bus growth).
struct TopologyError : SimError {
    using SimError::SimError;
};

}  // namespace clmsim
