//! Phrase pools for template sentences. A sentence is subject, verb, object
//! and one or more complements, so the pools multiply into millions of
//! distinct sentences. No entry contains a dot, a filtered word or a
//! boilerplate marker.

pub struct Lexicon {
    pub code: &'static str,
    pub subjects: &'static [&'static str],
    pub verbs: &'static [&'static str],
    pub objects: &'static [&'static str],
    pub complements: &'static [&'static str],
}

pub const ITALIAN: Lexicon = Lexicon {
    code: "it",
    subjects: &[
        "Il sindaco",
        "La maestra",
        "Mio nonno",
        "Una giovane ricercatrice",
        "Il comitato di quartiere",
        "La squadra locale",
        "Il nuovo direttore",
        "Una famiglia di Torino",
        "Il medico di base",
        "La biblioteca comunale",
        "Un gruppo di studenti",
        "Il governo regionale",
        "La cooperativa agricola",
        "Il fornaio del paese",
        "Una piccola azienda",
        "Il parroco",
        "La scrittrice",
        "Il vecchio pescatore",
        "La giunta comunale",
        "Un turista tedesco",
        "Il presidente dell'associazione",
        "La nostra vicina di casa",
        "Il responsabile del progetto",
        "Una studentessa di Bologna",
        "Il capitano della squadra",
        "La redazione del giornale",
        "Il professore di storia",
        "Un artigiano napoletano",
        "La guida alpina",
        "Il consiglio di classe",
        "Ogni abitante della frazione",
        "Quella signora gentile",
    ],
    verbs: &[
        "ha presentato",
        "ha organizzato",
        "ha criticato",
        "racconta",
        "descrive",
        "ha scoperto",
        "propone",
        "ha restaurato",
        "sostiene",
        "ha comprato",
        "ha visitato",
        "ricorda",
        "ha preparato",
        "studia",
        "difende",
        "ha pubblicato",
        "osserva",
        "ha raccolto",
        "annuncia",
        "ha ricevuto",
        "vuole migliorare",
        "cerca",
        "ha dipinto",
        "ha spiegato",
        "segue con attenzione",
        "ha discusso",
    ],
    objects: &[
        "un progetto per la scuola",
        "la vecchia stazione ferroviaria",
        "una mostra di fotografie",
        "il bilancio dell'anno scorso",
        "una ricetta della tradizione",
        "il programma delle vacanze",
        "un libro sulla storia della città",
        "la nuova piazza del mercato",
        "un piano per il traffico",
        "le proposte dei cittadini",
        "una lettera molto lunga",
        "il sentiero che porta al lago",
        "i risultati della ricerca",
        "la festa del patrono",
        "un concerto di musica classica",
        "la raccolta dei rifiuti",
        "una serie di incontri pubblici",
        "il restauro della chiesa",
        "i prezzi degli affitti",
        "una nuova linea di autobus",
        "le tradizioni della valle",
        "un corso di cucina",
        "la situazione delle strade",
        "il futuro del porto",
        "una raccolta di poesie",
        "gli orari della biblioteca",
    ],
    complements: &[
        "durante la riunione di ieri sera",
        "con grande entusiasmo",
        "nonostante la pioggia",
        "insieme ai volontari del paese",
        "davanti al consiglio comunale",
        "dopo molti mesi di lavoro",
        "nella sala del municipio",
        "per la prima volta",
        "senza troppe difficoltà",
        "sotto gli occhi dei giornalisti",
        "grazie al sostegno della regione",
        "all'inizio della primavera",
        "tra lo stupore generale",
        "con l'aiuto degli abitanti",
        "alla fine dell'estate",
        "in una lunga intervista",
        "secondo quanto riferito dai presenti",
        "per rispondere alle richieste delle famiglie",
        "lungo la strada principale",
        "mentre la città si preparava alla festa",
        "perché i fondi erano finalmente arrivati",
        "quando ormai nessuno ci sperava più",
        "come aveva promesso qualche anno fa",
        "accanto alla vecchia fontana",
        "nel corso della settimana",
        "prima che arrivasse l'inverno",
    ],
};

pub const ENGLISH: Lexicon = Lexicon {
    code: "en",
    subjects: &[
        "The mayor",
        "Our teacher",
        "My grandfather",
        "A young researcher",
        "The neighbourhood committee",
        "The local team",
        "The new director",
        "A family from Leeds",
        "The family doctor",
        "The public library",
        "A group of students",
        "The regional government",
        "The farming cooperative",
        "The village baker",
        "A small company",
        "The writer",
        "The old fisherman",
        "A German tourist",
        "The project manager",
        "The newspaper staff",
        "Every resident of the town",
        "That kind old lady",
    ],
    verbs: &[
        "presented",
        "organised",
        "criticised",
        "describes",
        "discovered",
        "proposes",
        "restored",
        "supports",
        "bought",
        "visited",
        "remembers",
        "prepared",
        "studies",
        "defends",
        "published",
        "watches",
        "collected",
        "announced",
        "received",
        "wants to improve",
        "explained",
        "discussed",
    ],
    objects: &[
        "a project for the school",
        "the old railway station",
        "an exhibition of photographs",
        "last year's budget",
        "a traditional recipe",
        "the holiday programme",
        "a book about the history of the city",
        "the new market square",
        "a plan for the traffic",
        "the proposals of the citizens",
        "a very long letter",
        "the path that leads to the lake",
        "the results of the research",
        "the summer festival",
        "a concert of classical music",
        "the waste collection",
        "a series of public meetings",
        "the restoration of the church",
        "the price of housing",
        "a new bus route",
        "the traditions of the valley",
        "a cooking course",
    ],
    complements: &[
        "during the meeting last night",
        "with great enthusiasm",
        "despite the rain",
        "together with the village volunteers",
        "in front of the town council",
        "after many months of work",
        "in the town hall",
        "for the first time",
        "without much trouble",
        "while the journalists were watching",
        "thanks to support from the region",
        "at the beginning of spring",
        "to everyone's surprise",
        "with help from the residents",
        "at the end of the summer",
        "in a long interview",
        "according to those who were there",
        "to answer the requests of local families",
        "along the main road",
        "while the city was getting ready for the holidays",
        "because the funding had finally arrived",
        "when nobody expected it any more",
    ],
};

pub const GERMAN: Lexicon = Lexicon {
    code: "de",
    subjects: &[
        "Der Bürgermeister",
        "Unsere Lehrerin",
        "Mein Großvater",
        "Eine junge Forscherin",
        "Der Stadtteilverein",
        "Die örtliche Mannschaft",
        "Der neue Direktor",
        "Eine Familie aus Köln",
        "Der Hausarzt",
        "Die Stadtbibliothek",
        "Eine Gruppe von Studenten",
        "Die Landesregierung",
        "Die landwirtschaftliche Genossenschaft",
        "Der Bäcker des Dorfes",
        "Ein kleines Unternehmen",
        "Die Schriftstellerin",
        "Der alte Fischer",
        "Ein italienischer Tourist",
        "Der Projektleiter",
        "Die Redaktion der Zeitung",
        "Jeder Einwohner des Ortes",
        "Die freundliche Nachbarin",
    ],
    verbs: &[
        "präsentiert",
        "organisiert",
        "kritisiert",
        "beschreibt",
        "entdeckt",
        "schlägt vor",
        "restauriert",
        "unterstützt",
        "kauft",
        "besucht",
        "erinnert sich an",
        "bereitet vor",
        "untersucht",
        "verteidigt",
        "veröffentlicht",
        "beobachtet",
        "sammelt",
        "kündigt an",
        "erhält",
        "möchte verbessern",
        "erklärt",
        "diskutiert",
    ],
    objects: &[
        "ein Projekt für die Schule",
        "den alten Bahnhof",
        "eine Ausstellung mit Fotografien",
        "den Haushalt des letzten Jahres",
        "ein traditionelles Rezept",
        "das Ferienprogramm",
        "ein Buch über die Geschichte der Stadt",
        "den neuen Marktplatz",
        "einen Plan für den Verkehr",
        "die Vorschläge der Bürger",
        "einen sehr langen Brief",
        "den Weg zum See",
        "die Ergebnisse der Forschung",
        "das Sommerfest",
        "ein Konzert mit klassischer Musik",
        "die Müllabfuhr",
        "eine Reihe von öffentlichen Treffen",
        "die Renovierung der Kirche",
        "die Preise der Wohnungen",
        "eine neue Buslinie",
        "die Bräuche des Tales",
        "einen Kochkurs",
    ],
    complements: &[
        "während der Sitzung gestern Abend",
        "mit großer Begeisterung",
        "trotz des Regens",
        "zusammen mit den Freiwilligen des Dorfes",
        "vor dem Gemeinderat",
        "nach vielen Monaten Arbeit",
        "im Rathaus",
        "zum ersten Mal",
        "ohne große Schwierigkeiten",
        "unter den Augen der Journalisten",
        "dank der Unterstützung des Landes",
        "am Anfang des Frühlings",
        "zur allgemeinen Überraschung",
        "mit der Hilfe der Bewohner",
        "am Ende des Sommers",
        "in einem langen Gespräch",
        "nach Angaben der Anwesenden",
        "um die Wünsche der Familien zu erfüllen",
        "entlang der Hauptstraße",
        "während sich die Stadt auf das Fest vorbereitete",
        "weil das Geld endlich angekommen war",
        "als niemand mehr daran glaubte",
    ],
};
