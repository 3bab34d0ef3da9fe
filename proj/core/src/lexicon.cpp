#include "mrforge/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "mrforge/errors.hpp"
#include "mrforge/text.hpp"

namespace mrforge::perturb {

namespace {

// Default word-pair lexicon, v1. Skewed towards review/news vocabulary so
// the bundled corpus gets real hits.
constexpr std::string_view kEmbeddedLexicon = R"(# mrforge lexicon v1
good	great,fine,solid	bad,poor
great	excellent,superb	terrible,awful
bad	poor,lousy	good,great
terrible	awful,dreadful	wonderful,great
awful	dreadful,horrible	wonderful,lovely
excellent	outstanding,superb	awful,poor
wonderful	marvelous,lovely	terrible,awful
happy	glad,pleased	sad,unhappy
sad	unhappy,gloomy	happy,cheerful
love	adore,cherish	hate,despise
hate	despise,loathe	love,adore
like	enjoy,fancy	dislike,hate
big	large,huge	small,tiny
small	little,tiny	big,large
fast	quick,rapid	slow,sluggish
slow	sluggish,unhurried	fast,quick
new	fresh,recent	old,stale
old	aged,ancient	new,fresh
cheap	inexpensive,affordable	expensive,costly
expensive	costly,pricey	cheap,affordable
easy	simple,effortless	hard,difficult
hard	difficult,tough	easy,simple
strong	sturdy,powerful	weak,feeble
weak	feeble,frail	strong,sturdy
clean	spotless,tidy	dirty,filthy
dirty	filthy,grimy	clean,spotless
bright	luminous,radiant	dark,dim
dark	dim,gloomy	bright,luminous
quiet	silent,calm	loud,noisy
loud	noisy,booming	quiet,silent
useful	handy,practical	useless,worthless
useless	worthless,futile	useful,handy
reliable	dependable,trusty	unreliable,flaky
smooth	even,sleek	rough,coarse
rough	coarse,uneven	smooth,sleek
fresh	crisp,new	stale,old
warm	cozy,mild	cold,chilly
cold	chilly,icy	warm,hot
rich	wealthy,lavish	poor,meager
poor	meager,shabby	rich,lavish
safe	secure,protected	dangerous,risky
dangerous	risky,hazardous	safe,secure
early	prompt,timely	late,delayed
late	delayed,tardy	early,prompt
full	complete,packed	empty,bare
empty	bare,vacant	full,packed
heavy	weighty,hefty	light,featherweight
light	featherweight,airy	heavy,weighty
long	lengthy,extended	short,brief
short	brief,compact	long,lengthy
high	tall,elevated	low,short
low	shallow,reduced	high,elevated
right	correct,proper	wrong,incorrect
wrong	incorrect,mistaken	right,correct
true	accurate,genuine	false,fake
false	fake,untrue	true,genuine
win	triumph,succeed	lose,fail
lose	fail,forfeit	win,succeed
buy	purchase,acquire	sell,return
sell	vend,trade	buy,keep
work	function,operate	fail,break
broken	damaged,faulty	fixed,working
fixed	repaired,mended	broken,damaged
nice	pleasant,agreeable	nasty,unpleasant
nasty	unpleasant,vile	nice,pleasant
best	finest,top	worst,poorest
worst	poorest,weakest	best,finest
quality	caliber,grade	junk,trash
value	worth,merit	waste,loss
recommend	endorse,suggest	discourage,oppose
disappointed	dissatisfied,letdown	pleased,satisfied
satisfied	pleased,content	disappointed,unhappy
perfect	flawless,ideal	flawed,imperfect
comfortable	cozy,snug	uncomfortable,awkward
sturdy	solid,robust	flimsy,fragile
flimsy	fragile,frail	sturdy,solid
quickly	rapidly,swiftly	slowly,gradually
slowly	gradually,leisurely	quickly,rapidly
helpful	supportive,obliging	unhelpful,obstructive
friendly	amiable,cordial	hostile,unfriendly
rise	climb,increase	fall,drop
fall	drop,decline	rise,climb
increase	growth,gain	decrease,drop
decrease	decline,reduction	increase,gain
major	significant,principal	minor,trivial
minor	trivial,slight	major,significant
local	regional,nearby	national,distant
global	worldwide,international	local,domestic
announce	declare,report	conceal,withhold
begin	start,commence	end,finish
end	finish,conclude	begin,start
)";

}  // namespace

const Lexicon& Lexicon::embedded() {
    static const Lexicon instance = [] {
        Lexicon lex = parse(kEmbeddedLexicon);
        lex.version_ = "embedded-v1";
        return lex;
    }();
    return instance;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open lexicon file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    Lexicon lex = parse(buf.str());
    lex.version_ = path.filename().string();
    return lex;
}

Lexicon Lexicon::parse(std::string_view content) {
    Lexicon lex;
    lex.version_ = "unversioned";
    std::size_t pos = 0;
    auto split_list = [](std::string_view s) {
        std::vector<std::string> out;
        std::size_t p = 0;
        while (p <= s.size()) {
            std::size_t q = s.find(',', p);
            if (q == std::string_view::npos) q = s.size();
            if (q > p) out.emplace_back(s.substr(p, q - p));
            p = q + 1;
        }
        return out;
    };
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string_view::npos) eol = content.size();
        std::string_view line = content.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line.front() == '#') continue;
        std::size_t t1 = line.find('\t');
        if (t1 == std::string_view::npos) continue;
        std::size_t t2 = line.find('\t', t1 + 1);
        std::string word = text::lowercase_ascii(line.substr(0, t1));
        Entry entry;
        std::string_view syn = t2 == std::string_view::npos ? line.substr(t1 + 1)
                                                            : line.substr(t1 + 1, t2 - t1 - 1);
        entry.synonyms = split_list(syn);
        if (t2 != std::string_view::npos) entry.antonyms = split_list(line.substr(t2 + 1));
        lex.entries_[word] = std::move(entry);
    }
    return lex;
}

const std::vector<std::string>* Lexicon::synonyms(std::string_view word) const {
    auto it = entries_.find(text::lowercase_ascii(word));
    if (it == entries_.end() || it->second.synonyms.empty()) return nullptr;
    return &it->second.synonyms;
}

const std::vector<std::string>* Lexicon::antonyms(std::string_view word) const {
    auto it = entries_.find(text::lowercase_ascii(word));
    if (it == entries_.end() || it->second.antonyms.empty()) return nullptr;
    return &it->second.antonyms;
}

}  // namespace mrforge::perturb
