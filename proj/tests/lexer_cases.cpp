#include "lexer_cases.hpp"

#include <random>
#include <sstream>

#include "phoenix/lexer.hpp"
#include "phoenix/preprocess.hpp"
#include "phoenix/source.hpp"
#include "ref_lexer.hpp"

namespace phoenix::test {
namespace {

const std::vector<std::string>& fixed_cases() {
    static const std::vector<std::string> cases = {
        "",
        "   \n\t \r\n ",
        "رقم عداد = 0 ;",
        "كلمة عنوان = \"مرحبا\" ;",
        "قائمة-رقم علامات[3] = { 12 , 7 , 20 } ;",
        "قائمة-كلمة أسماء[2] ;",
        "نهاية الوظيفة",
        "نهاية  الوظيفة",
        "نهاية\tالوظيفة",
        "نهاية\nالوظيفة",
        "نهايةالوظيفة",
        "نهاية الوظيفه",
        "نهاية ـ الوظيفة",
        "نهاية الوظيفةـ",
        "نهاية الوظيفة_1",
        "أما عدا ذلك",
        "أما  عدا \t ذلك",
        "أما عدا",
        "أما عدا ذل",
        "قائمة-رقم",
        "قائمة-كلمة",
        "قائمة - رقم",
        "قائمة-رقمية",
        "قائمة-قائمة",
        "قائمةـ-رقم",
        "قائمة-ـرقم",
        "قائمة--رقم",
        "قائمة-1رقم",
        "كُرّر : عداد < 5",
        "مُتَغَيِّر اســـم عـدد",
        "٤٢ ٣.٥ ١٢٣",
        "علامة٣ ص_1 متغير_طويل_جدا",
        "أدخل : علامة ، \"أدخل علامتك\" ؛",
        "\"علامة ١٢٣ ـ ً\"",
        "\"مع * / & || رموز\"",
        "\"\"",
        "1 12 3.14 0.5 123456789 1.0",
        "3.14.5 1.2.3",
        "===  &&& |||",
        "<= >= != == = < >",
        "+ - × * ÷ / % &",
        "( ) { } [ ] , ; : .",
        "س.ص مركز.حرك",
        "// تعليق كامل\nرقم",
        "رقم // يبتلع الباقي = 5 ;",
        "1.",
        "2..5",
        "9.س",
        "\"مفتوحة",
        "\"سطر\nجديد\"",
        "!",
        "|",
        "؟",
        "@",
        "a",
        "é",
        "🙂",
        "رقم ﻿ كلمة",
    };
    return cases;
}

const std::vector<std::string>& clean_pieces() {
    static const std::vector<std::string> pieces = {
        "رقم", "كلمة", "قائمة-رقم", "قائمة-كلمة", "وظيفة",
        "نهاية الوظيفة", "صنف", "عام", "خاص", "إذا",
        "أما عدا ذلك", "كرر", "كُرّر", "أعرض", "أدخل",
        "إستدعاء", "عودة", "البداية",
        "نهاية", "الوظيفة", "أما", "عدا", "ذلك", "قائمة",
        "مجموع", "عداد", "س", "ص_1", "اسم", "قيمة", "علامة٣",
        "مُتَغَيِّر", "اســـم",
        "0", "7", "42", "3.14", "0.5", "123456789", "٣", "٤٢", "1.0",
        "\"مرحبا\"", "\"\"", "\"a b c\"", "\"علامة ١٢٣\"",
        "\"مع * / & رموز\"",
        "+", "-", "×", "*", "÷", "/", "%", "&", "&&", "||",
        "=", "==", "!=", "<", ">", "<=", ">=",
        "(", ")", "{", "}", "[", "]", ",", "،", ";", "؛", ":", ".",
        "// تعليق\n",
        "رقم عداد = 0 ;",
        "أعرض : \"المعدل هو \" & (مجموع÷عداد) ;",
        "كرر : عداد < 5",
        "ق[م] = 7 ;",
        "إستدعاء : أ.أودع ( 50 ) ;",
    };
    return pieces;
}

const std::vector<std::string>& dirty_pieces() {
    static const std::vector<std::string> pieces = {
        "1.", "2..5", "9.س", "\"مفتوحة", "\"سطر\nجديد\"",
        "!", "|", "؟", "@", "$", "a", "Z", "é", "🙂", "﻿",
    };
    return pieces;
}

std::string generate_case(std::mt19937& rng, bool adversarial) {
    static const std::vector<std::string> seps = {
        " ", " ", " ", "", "\n", "\t", "  ", " \r\n", "ـ", " ً ",
    };
    std::uniform_int_distribution<int> len_dist(1, 24);
    std::uniform_int_distribution<size_t> clean_dist(0,
                                                     clean_pieces().size() - 1);
    std::uniform_int_distribution<size_t> dirty_dist(0,
                                                     dirty_pieces().size() - 1);
    std::uniform_int_distribution<size_t> sep_dist(0, seps.size() - 1);
    std::uniform_int_distribution<int> dirty_roll(0, 9);

    const int n = len_dist(rng);
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (adversarial && dirty_roll(rng) == 0) {
            out += dirty_pieces()[dirty_dist(rng)];
        } else {
            out += clean_pieces()[clean_dist(rng)];
        }
        out += seps[sep_dist(rng)];
    }
    return out;
}

RefToken to_ref(const Token& t) {
    RefToken r;
    r.kind = std::string(token_kind_name(t.kind));
    r.lexeme = t.lexeme;
    r.num_value = t.num_value;
    r.str_value = t.str_value;
    r.start = t.span.start;
    r.end = t.span.end;
    return r;
}

std::string describe(const RefToken& t) {
    std::ostringstream os;
    os << t.kind << " '" << t.lexeme << "' num=" << t.num_value << " str='"
       << t.str_value << "' span=" << t.start << ".." << t.end;
    return os.str();
}

} // namespace

std::vector<std::string> lexer_corpus(const std::string& sample_text) {
    std::vector<std::string> corpus = fixed_cases();
    corpus.push_back(sample_text);

    std::mt19937 rng(20260819u);
    while (corpus.size() < 1000) {
        // Roughly a third of the generated texts mix in rejection pieces.
        const bool adversarial = corpus.size() % 3 == 0;
        corpus.push_back(generate_case(rng, adversarial));
    }
    return corpus;
}

std::optional<std::string> lexer_mismatch(const std::string& text) {
    SourceFile src = SourceFile::from_text("gen.phx", text);
    PreprocessedSource pre = preprocess(src);
    RefResult ref = ref_tokenize(pre.codepoints);

    std::vector<Token> tokens;
    std::optional<Diagnostic> err;
    try {
        tokens = tokenize(src, pre);
    } catch (const CompileError& e) {
        err = e.diagnostic;
    }

    if (err) {
        if (!ref.reject.has_value()) {
            return "scanner rejected (" + err->code +
                   ") but the reference accepted";
        }
        if (err->code != ref.reject->code) {
            return "rejection codes differ: scanner " + err->code +
                   ", reference " + ref.reject->code;
        }
        if (!err->span.has_value() || err->span->start != ref.reject->at) {
            return "rejection offsets differ for code " + err->code;
        }
        return std::nullopt;
    }
    if (ref.reject.has_value()) {
        return "reference rejected (" + ref.reject->code +
               ") but the scanner accepted";
    }
    if (tokens.size() != ref.tokens.size()) {
        return "token counts differ: scanner " +
               std::to_string(tokens.size()) + ", reference " +
               std::to_string(ref.tokens.size());
    }
    for (size_t k = 0; k < tokens.size(); ++k) {
        const RefToken got = to_ref(tokens[k]);
        if (!(got == ref.tokens[k])) {
            return "token " + std::to_string(k) + " differs: scanner " +
                   describe(got) + ", reference " + describe(ref.tokens[k]);
        }
    }
    return std::nullopt;
}

} // namespace phoenix::test
