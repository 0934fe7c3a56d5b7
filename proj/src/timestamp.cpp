#include "rcpm/timestamp.hpp"

#include <cstdio>

namespace rcpm {
namespace {

using namespace std::chrono;

struct Fields {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
    long micros = 0;
    int offset_minutes = 0;
};

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    bool done() const { return pos_ == s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    // Exactly `width` digits.
    bool digits(int width, int& out) {
        if (pos_ + static_cast<std::size_t>(width) > s_.size()) return false;
        int v = 0;
        for (int i = 0; i < width; ++i) {
            char c = s_[pos_ + i];
            if (c < '0' || c > '9') return false;
            v = v * 10 + (c - '0');
        }
        pos_ += width;
        out = v;
        return true;
    }

    bool fraction(long& micros) {
        std::size_t start = pos_;
        long v = 0;
        int used = 0;
        while (!done() && peek() >= '0' && peek() <= '9') {
            if (used < 6) {
                v = v * 10 + (peek() - '0');
                ++used;
            }
            ++pos_;
        }
        if (pos_ == start) return false;
        for (; used < 6; ++used) v *= 10;
        micros = v;
        return true;
    }

    bool offset(int& minutes) {
        if (eat('Z') || eat('z')) {
            minutes = 0;
            return true;
        }
        int sign = 0;
        if (eat('+'))
            sign = 1;
        else if (eat('-'))
            sign = -1;
        else
            return false;
        int hh = 0;
        int mm = 0;
        if (!digits(2, hh)) return false;
        if (eat(':')) {
            if (!digits(2, mm)) return false;
        } else if (!done() && peek() >= '0' && peek() <= '9') {
            if (!digits(2, mm)) return false;
        }
        if (hh > 23 || mm > 59) return false;
        minutes = sign * (hh * 60 + mm);
        return true;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

std::optional<Timestamp> assemble(const Fields& f) {
    year_month_day ymd{year{f.year}, month{f.month}, day{f.day}};
    if (!ymd.ok()) return std::nullopt;
    if (f.hour > 23 || f.minute > 59 || f.second > 60) return std::nullopt;
    auto t = sys_days{ymd} + hours{f.hour} + minutes{f.minute} + seconds{f.second} + microseconds{f.micros};
    return time_point_cast<microseconds>(t - minutes{f.offset_minutes});
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
    Cursor c(text);
    Fields f;
    int mo = 0;
    int d = 0;
    if (!c.digits(4, f.year) || !c.eat('-') || !c.digits(2, mo) || !c.eat('-') || !c.digits(2, d)) return std::nullopt;
    f.month = static_cast<unsigned>(mo);
    f.day = static_cast<unsigned>(d);
    if (c.done()) return assemble(f);
    if (!c.eat('T') && !c.eat(' ')) return std::nullopt;
    if (!c.digits(2, f.hour) || !c.eat(':') || !c.digits(2, f.minute)) return std::nullopt;
    if (c.eat(':')) {
        if (!c.digits(2, f.second)) return std::nullopt;
        if (c.eat('.') || c.eat(',')) {
            if (!c.fraction(f.micros)) return std::nullopt;
        }
    }
    if (!c.done() && !c.offset(f.offset_minutes)) return std::nullopt;
    if (!c.done()) return std::nullopt;
    return assemble(f);
}

std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format) {
    if (format.empty() || format == kIsoFormat) return parse_iso8601(text);
    Cursor c(text);
    Fields f;
    for (std::size_t i = 0; i < format.size(); ++i) {
        char fc = format[i];
        if (fc != '%') {
            if (!c.eat(fc)) return std::nullopt;
            continue;
        }
        if (++i == format.size()) return std::nullopt;
        int v = 0;
        switch (format[i]) {
            case 'Y':
                if (!c.digits(4, f.year)) return std::nullopt;
                break;
            case 'm':
                if (!c.digits(2, v)) return std::nullopt;
                f.month = static_cast<unsigned>(v);
                break;
            case 'd':
                if (!c.digits(2, v)) return std::nullopt;
                f.day = static_cast<unsigned>(v);
                break;
            case 'H':
                if (!c.digits(2, f.hour)) return std::nullopt;
                break;
            case 'M':
                if (!c.digits(2, f.minute)) return std::nullopt;
                break;
            case 'S':
                if (!c.digits(2, f.second)) return std::nullopt;
                break;
            case 'f':
                if (!c.fraction(f.micros)) return std::nullopt;
                break;
            case 'z':
                if (!c.offset(f.offset_minutes)) return std::nullopt;
                break;
            case '%':
                if (!c.eat('%')) return std::nullopt;
                break;
            default:
                return std::nullopt;
        }
    }
    if (!c.done()) return std::nullopt;
    return assemble(f);
}

std::string format_iso8601(Timestamp ts) {
    auto day_point = floor<days>(ts);
    year_month_day ymd{day_point};
    hh_mm_ss<microseconds> tod{ts - day_point};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()), static_cast<long>(tod.subseconds().count()));
    return buf;
}

}  // namespace rcpm
