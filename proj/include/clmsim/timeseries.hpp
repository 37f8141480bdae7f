#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace clmsim {

/// Named output channels sampled once per time step.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<std::string> channels) : channels_(std::move(channels)) {}

    [[nodiscard]] const std::vector<std::string>& channels() const { return channels_; }
    [[nodiscard]] std::size_t size() const { return times_.size(); }
    [[nodiscard]] bool empty() const { return times_.empty(); }

    void append(double t, const std::vector<double>& values) {
        if (values.size() != channels_.size())
            throw std::invalid_argument("TimeSeries row arity mismatch");
        if (!times_.empty() && t <= times_.back())
            throw std::invalid_argument("TimeSeries time must be strictly increasing");
        times_.push_back(t);
        rows_.push_back(values);
    }

    [[nodiscard]] double time(std::size_t row) const { return times_.at(row); }
    [[nodiscard]] const std::vector<double>& row(std::size_t i) const { return rows_.at(i); }

    /// Index of a channel by exact name; throws if absent.
    [[nodiscard]] std::size_t channel_index(const std::string& name) const {
        for (std::size_t i = 0; i < channels_.size(); ++i)
            if (channels_[i] == name) return i;
        throw std::out_of_range("no channel named '" + name + "'");
    }

    [[nodiscard]] double value(std::size_t row, const std::string& channel) const {
        return rows_.at(row).at(channel_index(channel));
    }

    /// Whole column for one channel.
    [[nodiscard]] std::vector<double> column(const std::string& channel) const {
        const std::size_t k = channel_index(channel);
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.push_back(r[k]);
        return out;
    }

private:
    std::vector<std::string> channels_;
    std::vector<double> times_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace clmsim
