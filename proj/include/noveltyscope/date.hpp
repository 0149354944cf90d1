#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace noveltyscope {

// Calendar date with day resolution. Arithmetic is in whole days.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                            std::chrono::day{d}}) {}

    // Strict YYYY-MM-DD; returns nullopt on anything else or an invalid calendar day.
    static std::optional<Date> parse(std::string_view iso);

    std::string iso() const;
    long long serial() const { return days_.time_since_epoch().count(); }

    Date minus_days(long long n) const { return Date(days_ - std::chrono::days{n}); }
    Date plus_days(long long n) const { return Date(days_ + std::chrono::days{n}); }
    long long days_until(const Date& later) const { return later.serial() - serial(); }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace noveltyscope
