#ifndef RCP_TOOLS_JSONFMT_HPP
#define RCP_TOOLS_JSONFMT_HPP

// Minimal JSON emitter with explicit key order and fixed float formatting
// (17 significant digits), so repeated invocations are byte-identical and
// regression tests can compare output exactly.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>

namespace jsonfmt {

inline std::string num(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Writer {
  public:
    const std::string& str() const { return out_; }

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& k) {
        comma();
        out_ += '"';
        escape(k);
        out_ += "\":";
        pending_value_ = true;
    }

    void value(double v) { raw(num(v)); }
    void value(int v) { raw(std::to_string(v)); }
    void value(std::uint64_t v) { raw(std::to_string(v)); }
    void value(std::int64_t v) { raw(std::to_string(v)); }
    void value(bool v) { raw(v ? "true" : "false"); }
    void value(const std::string& s) {
        comma();
        out_ += '"';
        escape(s);
        out_ += '"';
        pending_value_ = false;
    }
    void value(const char* s) { value(std::string(s)); }
    void value_null() { raw("null"); }

  private:
    std::string out_;
    bool needs_comma_ = false;
    bool pending_value_ = false;

    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (needs_comma_) out_ += ',';
        needs_comma_ = true;
    }
    void raw(const std::string& s) {
        comma();
        out_ += s;
    }
    void open(char c) {
        comma();
        out_ += c;
        needs_comma_ = false;
    }
    void close(char c) {
        out_ += c;
        needs_comma_ = true;
        pending_value_ = false;
    }
    void escape(const std::string& s) {
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                default: out_ += c;
            }
        }
    }
};

}  // namespace jsonfmt

#endif
