#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sketchmo/motion.hpp"

namespace sketchmo {

namespace detail {

struct Token {
    std::string_view text;
    std::size_t line;
};

// Splits on whitespace; braces are always tokens of their own.
inline std::vector<Token> tokenize(std::string_view src, std::size_t first_line = 1) {
    std::vector<Token> out;
    std::size_t line = first_line;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
        } else if (c == '{' || c == '}') {
            out.push_back({src.substr(i, 1), line});
            ++i;
        } else {
            const std::size_t start = i;
            while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) && src[i] != '{' &&
                   src[i] != '}')
                ++i;
            out.push_back({src.substr(start, i - start), line});
        }
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

class HierarchyParser {
public:
    HierarchyParser(const std::vector<Token>& tokens, std::size_t last_line) : t_(tokens), last_line_(last_line) {}

    std::vector<Joint> parse() {
        expect("HIERARCHY");
        expect("ROOT");
        parse_joint(std::nullopt);
        return std::move(joints_);
    }

    std::size_t position() const { return pos_; }

private:
    const Token& peek() const {
        if (pos_ >= t_.size()) throw ParseError(last_line_, "unexpected end of hierarchy");
        return t_[pos_];
    }

    const Token& next() {
        const Token& tok = peek();
        ++pos_;
        return tok;
    }

    void expect(std::string_view word) {
        const Token& tok = next();
        if (tok.text != word)
            throw ParseError(tok.line, "expected '" + std::string(word) + "', found '" + std::string(tok.text) + "'");
    }

    Vec3 parse_offset() {
        const Token& kw = next();
        if (kw.text != "OFFSET") throw ParseError(kw.line, "missing OFFSET, found '" + std::string(kw.text) + "'");
        Vec3 v;
        for (int k = 0; k < 3; ++k) {
            const Token& tok = next();
            if (!parse_double(tok.text, v[k]))
                throw ParseError(tok.line, "bad OFFSET component '" + std::string(tok.text) + "'");
        }
        return v;
    }

    std::vector<Channel> parse_channels() {
        const Token& kw = next();
        if (kw.text != "CHANNELS")
            throw ParseError(kw.line, "missing CHANNELS, found '" + std::string(kw.text) + "'");
        const Token& count_tok = next();
        int count = -1;
        const auto [ptr, ec] =
            std::from_chars(count_tok.text.data(), count_tok.text.data() + count_tok.text.size(), count);
        if (ec != std::errc() || ptr != count_tok.text.data() + count_tok.text.size() || count < 0 || count > 6)
            throw ParseError(count_tok.line, "bad channel count '" + std::string(count_tok.text) + "'");
        std::vector<Channel> channels;
        for (int k = 0; k < count; ++k) {
            const Token& tok = next();
            const auto ch = channel_from_string(tok.text);
            if (!ch) throw ParseError(tok.line, "unknown channel '" + std::string(tok.text) + "'");
            channels.push_back(*ch);
        }
        return channels;
    }

    void parse_joint(std::optional<std::size_t> parent) {
        const Token& name = next();
        if (name.text == "{" || name.text == "}") throw ParseError(name.line, "missing joint name");
        expect("{");
        const std::size_t index = joints_.size();
        joints_.push_back(Joint{std::string(name.text), parent, Vec3::Zero(), {}, std::nullopt});
        joints_[index].offset = parse_offset();
        joints_[index].channels = parse_channels();
        for (;;) {
            const Token& tok = next();
            if (tok.text == "}") return;
            if (tok.text == "JOINT") {
                parse_joint(index);
            } else if (tok.text == "End") {
                expect("Site");
                expect("{");
                if (joints_[index].end_site) throw ParseError(tok.line, "joint has more than one End Site");
                joints_[index].end_site = parse_offset();
                expect("}");
            } else {
                throw ParseError(tok.line, "unexpected '" + std::string(tok.text) + "' in joint block");
            }
        }
    }

    const std::vector<Token>& t_;
    std::size_t last_line_;
    std::size_t pos_ = 0;
    std::vector<Joint> joints_;
};

// Fixed six decimals, trailing zeros trimmed down to four.
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    const std::size_t dot = s.find('.');
    while (s.size() > dot + 5 && s.back() == '0') s.pop_back();
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

// Shortest text that parses back to exactly `v`.
inline std::string format_exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_joint(std::ostream& os, const Skeleton& sk, std::size_t j, int depth) {
    const std::string indent(static_cast<std::size_t>(depth), '\t');
    const Joint& joint = sk.joint(j);
    os << indent << (joint.parent ? "JOINT " : "ROOT ") << joint.name << '\n' << indent << "{\n";
    os << indent << "\tOFFSET " << format_value(joint.offset.x()) << ' ' << format_value(joint.offset.y()) << ' '
       << format_value(joint.offset.z()) << '\n';
    os << indent << "\tCHANNELS " << joint.channels.size();
    for (Channel c : joint.channels) os << ' ' << to_string(c);
    os << '\n';
    for (std::size_t c : sk.children(j)) write_joint(os, sk, c, depth + 1);
    if (joint.end_site) {
        const Vec3& e = *joint.end_site;
        os << indent << "\tEnd Site\n" << indent << "\t{\n";
        os << indent << "\t\tOFFSET " << format_value(e.x()) << ' ' << format_value(e.y()) << ' '
           << format_value(e.z()) << '\n';
        os << indent << "\t}\n";
    }
    os << indent << "}\n";
}

}  // namespace detail

// Parses a BVH document (HIERARCHY then MOTION). Hierarchy problems raise
// ParseError with the offending line; frame table mismatches raise StructureError.
inline Motion parse_bvh(std::string_view text, std::string id = {}, std::string label = {}) {
    // Split at the MOTION keyword so frame rows can be read line by line.
    std::size_t motion_at = std::string_view::npos;
    {
        std::size_t pos = 0;
        while ((pos = text.find("MOTION", pos)) != std::string_view::npos) {
            const bool start_ok = pos == 0 || std::isspace(static_cast<unsigned char>(text[pos - 1])) ||
                                  text[pos - 1] == '}';
            const bool end_ok = pos + 6 >= text.size() || std::isspace(static_cast<unsigned char>(text[pos + 6]));
            if (start_ok && end_ok) {
                motion_at = pos;
                break;
            }
            pos += 6;
        }
    }
    const std::string_view head = text.substr(0, motion_at);
    const std::size_t head_lines = static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));

    const auto tokens = detail::tokenize(head);
    detail::HierarchyParser hp(tokens, head_lines + 1);
    std::vector<Joint> joints = hp.parse();
    if (hp.position() != tokens.size())
        throw ParseError(tokens[hp.position()].line,
                         "unexpected '" + std::string(tokens[hp.position()].text) + "' after hierarchy");
    if (motion_at == std::string_view::npos) throw ParseError(head_lines + 1, "missing MOTION section");

    Skeleton skeleton(std::move(joints));

    // MOTION header.
    std::size_t line = head_lines + 1;
    std::string_view rest = text.substr(motion_at);
    auto next_line = [&](std::string_view& out) -> bool {
        if (rest.empty()) return false;
        const std::size_t nl = rest.find('\n');
        out = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        return true;
    };
    auto header_tokens = [&](std::string_view what) {
        std::string_view l;
        for (;;) {
            if (!next_line(l)) throw ParseError(line, "missing " + std::string(what));
            auto toks = detail::tokenize(l, line);
            ++line;
            if (!toks.empty()) return toks;
        }
    };

    header_tokens("MOTION");  // the keyword line itself
    double frames_d = 0.0;
    {
        auto toks = header_tokens("Frames:");
        const std::size_t l = toks.front().line;
        std::string joined;
        for (const auto& t : toks) joined += t.text;
        if (joined.rfind("Frames:", 0) != 0 || !detail::parse_double(std::string_view(joined).substr(7), frames_d) ||
            frames_d < 0 || frames_d != static_cast<double>(static_cast<long long>(frames_d)))
            throw ParseError(l, "expected 'Frames: <count>'");
    }
    double frame_time = 0.0;
    {
        auto toks = header_tokens("Frame Time:");
        const std::size_t l = toks.front().line;
        std::string joined;
        for (const auto& t : toks) joined += std::string(t.text) + ' ';
        if (joined.rfind("Frame Time:", 0) != 0 || toks.size() < 2 ||
            !detail::parse_double(toks.back().text, frame_time))
            throw ParseError(l, "expected 'Frame Time: <seconds>'");
    }

    const auto frame_count = static_cast<std::size_t>(frames_d);
    const std::size_t width = skeleton.channel_count();
    FrameMatrix frames(static_cast<Eigen::Index>(frame_count), static_cast<Eigen::Index>(width));
    std::size_t row = 0;
    std::string_view l;
    while (next_line(l)) {
        const auto toks = detail::tokenize(l, line);
        if (!toks.empty()) {
            if (row >= frame_count)
                throw StructureError("line " + std::to_string(line) + ": more frame rows than the declared " +
                                     std::to_string(frame_count));
            if (toks.size() != width)
                throw StructureError("line " + std::to_string(line) + ": frame row has " +
                                     std::to_string(toks.size()) + " values, expected " + std::to_string(width));
            for (std::size_t c = 0; c < width; ++c) {
                double v = 0.0;
                if (!detail::parse_double(toks[c].text, v))
                    throw ParseError(line, "bad channel value '" + std::string(toks[c].text) + "'");
                frames(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = v;
            }
            ++row;
        }
        ++line;
    }
    if (row != frame_count)
        throw StructureError("declared " + std::to_string(frame_count) + " frames but found " + std::to_string(row));

    return Motion(std::move(skeleton), frame_time, std::move(frames), std::move(id), std::move(label));
}

inline Motion parse_bvh(std::istream& in, std::string id = {}, std::string label = {}) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_bvh(std::string_view(text), std::move(id), std::move(label));
}

// Id defaults to the file stem.
inline Motion load_bvh(const std::filesystem::path& path, std::string label = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LookupError("cannot open '" + path.string() + "'");
    return parse_bvh(in, path.stem().string(), std::move(label));
}

inline void write_bvh(const Motion& motion, std::ostream& os) {
    const Skeleton& sk = motion.skeleton();
    os << "HIERARCHY\n";
    detail::write_joint(os, sk, 0, 0);
    os << "MOTION\n";
    os << "Frames: " << motion.frame_count() << '\n';
    os << "Frame Time: " << detail::format_exact(motion.frame_time()) << '\n';
    const FrameMatrix& f = motion.frames();
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
        for (Eigen::Index c = 0; c < f.cols(); ++c) {
            if (c) os << ' ';
            os << detail::format_value(f(r, c));
        }
        os << '\n';
    }
}

inline std::string write_bvh(const Motion& motion) {
    std::ostringstream os;
    write_bvh(motion, os);
    return os.str();
}

inline void save_bvh(const Motion& motion, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LookupError("cannot write '" + path.string() + "'");
    write_bvh(motion, out);
}

}  // namespace sketchmo
