#include <cmath>
#include <map>
#include <string>
#include <string_view>

#include "forge/filtering.hpp"
#include "forge/utf8.hpp"

namespace forge {
namespace {

// Seed texts used to build the bundled trigram profiles. Generic prose per
// language; the scorer only needs character-level statistics.
constexpr std::string_view kPortugueseSeed =
    "A cidade acordou cedo naquela manhã de outubro, com as ruas ainda molhadas pela chuva da "
    "noite anterior. As pessoas caminhavam apressadas para o trabalho, enquanto os vendedores "
    "abriam suas lojas e organizavam as frutas nas bancas do mercado. O professor chegou à "
    "escola antes dos alunos e preparou a sala para a primeira aula do dia. Ele gostava de "
    "explicar as coisas com calma, usando exemplos simples que todos pudessem entender. Quando "
    "as crianças entraram, ele escreveu no quadro uma pergunta sobre a história do Brasil e "
    "pediu que cada uma dissesse o que pensava. A discussão foi longa e animada, porque os "
    "estudantes tinham opiniões muito diferentes sobre o assunto. No fim da tarde, depois que "
    "todos foram embora, o professor ficou um tempo olhando pela janela, pensando em como "
    "poderia melhorar a próxima lição. A educação, ele sempre dizia, é uma construção lenta "
    "que exige paciência e dedicação de todos os envolvidos. Não há caminho curto para o "
    "conhecimento, mas cada passo dado com cuidado deixa uma marca duradoura na vida das "
    "pessoas que aprendem e também na vida de quem ensina.";

constexpr std::string_view kEnglishSeed =
    "The city woke up early that October morning, with the streets still wet from the rain of "
    "the previous night. People walked quickly to work while shopkeepers opened their stores "
    "and arranged fruit on the market stalls. The teacher arrived at school before the "
    "students and prepared the room for the first lesson of the day. He liked to explain "
    "things slowly, using simple examples that everyone could understand. When the children "
    "came in, he wrote a question on the board about the history of the country and asked "
    "each of them to say what they thought. The discussion was long and lively because the "
    "students held very different opinions on the subject. At the end of the afternoon, after "
    "everyone had gone home, the teacher stood for a while looking out of the window, thinking "
    "about how he could improve the next lesson. Education, he always said, is a slow "
    "construction that demands patience and dedication from everyone involved. There is no "
    "short path to knowledge, but every careful step leaves a lasting mark on the lives of "
    "those who learn and of those who teach.";

constexpr std::string_view kSpanishSeed =
    "La ciudad despertó temprano aquella mañana de octubre, con las calles todavía mojadas por "
    "la lluvia de la noche anterior. La gente caminaba deprisa hacia el trabajo mientras los "
    "vendedores abrían sus tiendas y ordenaban la fruta en los puestos del mercado. El maestro "
    "llegó a la escuela antes que los alumnos y preparó el aula para la primera clase del día. "
    "Le gustaba explicar las cosas con calma, usando ejemplos sencillos que todos pudieran "
    "entender. Cuando los niños entraron, escribió en la pizarra una pregunta sobre la "
    "historia del país y pidió que cada uno dijera lo que pensaba. La discusión fue larga y "
    "animada porque los estudiantes tenían opiniones muy distintas sobre el tema. Al final de "
    "la tarde, cuando todos se habían ido, el maestro se quedó un rato mirando por la ventana, "
    "pensando en cómo podría mejorar la próxima lección. La educación, decía siempre, es una "
    "construcción lenta que exige paciencia y dedicación de todos los implicados. No hay "
    "camino corto hacia el conocimiento, pero cada paso dado con cuidado deja una huella "
    "duradera en la vida de quienes aprenden y de quienes enseñan.";

std::map<std::string, double> trigram_counts(std::string_view text) {
    // trigrams over lowercased codepoints, whitespace folded to '_'
    std::u32string cps;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = utf8::next(text, pos);
        if (utf8::is_whitespace(cp)) cp = U'_';
        if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
        if (cps.empty() && cp == U'_') continue;
        if (cp == U'_' && !cps.empty() && cps.back() == U'_') continue;
        cps.push_back(cp);
    }
    std::map<std::string, double> counts;
    if (cps.size() < 3) return counts;
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
        std::string key;
        for (std::size_t k = 0; k < 3; ++k) utf8::append(key, cps[i + k]);
        counts[key] += 1.0;
    }
    return counts;
}

double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [k, v] : a) {
        na += v * v;
        const auto it = b.find(k);
        if (it != b.end()) dot += v * it->second;
    }
    for (const auto& [k, v] : b) nb += v * v;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

TrigramLanguageScorer::TrigramLanguageScorer() {
    profiles_["pt"] = trigram_counts(kPortugueseSeed);
    profiles_["en"] = trigram_counts(kEnglishSeed);
    profiles_["es"] = trigram_counts(kSpanishSeed);
}

std::map<std::string, double> TrigramLanguageScorer::scores(std::string_view text) const {
    std::map<std::string, double> out;
    const auto counts = trigram_counts(text);
    double total = 0.0;
    for (const auto& [lang, profile] : profiles_) {
        // raising the cosine to a high power peaks the distribution the way
        // a trained classifier's probabilities are peaked; related languages
        // share many trigrams, so raw cosines are never decisive
        const double sim = std::pow(cosine(counts, profile), 8.0);
        out[lang] = sim;
        total += sim;
    }
    if (total > 0.0) {
        for (auto& [lang, score] : out) score /= total;
    }
    return out;
}

}  // namespace forge
