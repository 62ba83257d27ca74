#include "phoenix/source.hpp"

#include <algorithm>

namespace phoenix {

std::u32string utf8_decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0xFFFD;
        size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < n) {
            const unsigned char b1 = static_cast<unsigned char>(text[i + 1]);
            if ((b1 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x1F) << 6) | char32_t(b1 & 0x3F);
                len = 2;
                if (cp < 0x80) cp = 0xFFFD; // overlong
            }
        } else if ((b0 & 0xF0) == 0xE0 && i + 2 < n) {
            const unsigned char b1 = static_cast<unsigned char>(text[i + 1]);
            const unsigned char b2 = static_cast<unsigned char>(text[i + 2]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(b1 & 0x3F) << 6) |
                     char32_t(b2 & 0x3F);
                len = 3;
                if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
            }
        } else if ((b0 & 0xF8) == 0xF0 && i + 3 < n) {
            const unsigned char b1 = static_cast<unsigned char>(text[i + 1]);
            const unsigned char b2 = static_cast<unsigned char>(text[i + 2]);
            const unsigned char b3 = static_cast<unsigned char>(text[i + 3]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 && (b3 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x07) << 18) | (char32_t(b1 & 0x3F) << 12) |
                     (char32_t(b2 & 0x3F) << 6) | char32_t(b3 & 0x3F);
                len = 4;
                if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

std::string utf8_encode(std::u32string_view codepoints) {
    std::string out;
    out.reserve(codepoints.size() * 2);
    for (char32_t cp : codepoints) out += utf8_encode(cp);
    return out;
}

SourceFile SourceFile::from_text(std::string path, std::string_view utf8_text) {
    SourceFile f;
    f.path = std::move(path);
    f.codepoints = utf8_decode(utf8_text);
    if (!f.codepoints.empty() && f.codepoints.front() == 0xFEFF)
        f.codepoints.erase(f.codepoints.begin());
    f.line_starts.push_back(0);
    for (uint32_t i = 0; i < f.codepoints.size(); ++i) {
        if (f.codepoints[i] == U'\n') f.line_starts.push_back(i + 1);
    }
    return f;
}

uint32_t SourceFile::line_of(uint32_t offset) const {
    auto it = std::upper_bound(line_starts.begin(), line_starts.end(), offset);
    return static_cast<uint32_t>(it - line_starts.begin());
}

uint32_t SourceFile::column_of(uint32_t offset) const {
    const uint32_t line = line_of(offset);
    return offset - line_starts[line - 1] + 1;
}

std::string SourceFile::line_text(uint32_t line) const {
    if (line == 0 || line > line_starts.size()) return {};
    const uint32_t begin = line_starts[line - 1];
    uint32_t end = begin;
    while (end < codepoints.size() && codepoints[end] != U'\n') ++end;
    return utf8_encode(std::u32string_view(codepoints).substr(begin, end - begin));
}

Span Span::at(const SourceFile& src, uint32_t start, uint32_t end) {
    Span s;
    s.start = start;
    s.end = end;
    s.line = src.line_of(start);
    s.col = src.column_of(start);
    return s;
}

Span span_merge(const Span& a, const Span& b) {
    const Span& first = (a.start <= b.start) ? a : b;
    Span s;
    s.start = std::min(a.start, b.start);
    s.end = std::max(a.end, b.end);
    s.line = first.line;
    s.col = first.col;
    return s;
}

std::string_view phase_name(Phase phase) {
    switch (phase) {
    case Phase::Preprocess: return "preprocess";
    case Phase::Lex: return "lex";
    case Phase::Parse: return "parse";
    case Phase::Semantic: return "semantic";
    case Phase::Codegen: return "codegen";
    case Phase::Link: return "link";
    case Phase::Runtime: return "runtime";
    }
    return "unknown";
}

std::string render_diagnostic(const Diagnostic& d, const SourceFile& src) {
    std::string out;
    out += phase_name(d.phase);
    out += ' ';
    out += d.code;
    out += ' ';
    if (d.span) {
        out += std::to_string(d.span->line);
        out += ':';
        out += std::to_string(d.span->col);
        out += ' ';
    }
    out += d.message;
    if (d.span) {
        out += '\n';
        out += src.line_text(d.span->line);
    }
    return out;
}

} // namespace phoenix
