#!/usr/bin/env python3
"""Generate fixture frequency lexicons (token<TAB>freq) for the shared-script
languages. Enforces pairwise disjointness inside each script group before
writing, mirroring the crate's own test."""

import sys
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "crates/bitext-prospector/data/lexicons"

WORDS = {
    # --- Latin ---------------------------------------------------------
    "en": """
the and was were are is been being have has had not but they them their
there this that these those which what when where who whose why how will
would shall should can could might must about above after again against
all almost along already although always among another any anyone anything
around because become before began begin behind below between both came
come does done down during each early end enough even ever every few find
first found from get give goes going gone good got great group hand here
high him his her home house into its just keep kind know known large last
later least left less life like little long look made make many more most
much need never new next now number off often old once one only on open
other our out over own part people place point put right said same saw say
see seen she since small some something soon still such take taken tell
than then thing think though three through time today together told took
toward two under until upon used using very want water way week well went
while white whole with within without word work world year years young
your black cat dog sun moon tree river book sentence language english
french german spanish italian portuguese russian chinese japanese korean
arabic hindi translation example hello morning night city country school
student teacher story family friend mother father in of to at by up so no
do go if or as an am be we he my it is
""",
    "fr": """
les des une est sont était être avoir fait faire avec dans pour sur pas
plus mais comme tout tous toute toutes bien très aussi leur leurs cette
ces celui celle ceux aux autre autres même peut sans sous après avant
toujours jamais maintenant beaucoup quelque quelques chose choses femme
homme enfant enfants jour nuit monde vie temps année années eau terre ciel
mer ville maison porte chien chat noir noire blanc blanche rouge bleu vert
verte grand petit petite nouveau nouvelle vieux bon bonne mauvais premier
première dernier dernière français française anglais anglaise allemand
espagnol bonjour merci oui voiture livre mot mots phrase langue traduction
traduire le elle elles nous vous ils qui que quoi dont où ses nos vos
notre votre parle parler dit dire voir venir aller donner prendre savoir
pouvoir vouloir devoir trouver penser aimer deux trois quatre cinq sept
huit neuf dix
""",
    "de": """
und ist sind waren sein seine seiner nicht ein eine einen einem einer
eines dem den der das die mit für auf aus bei nach von zu zum zur über
unter durch gegen ohne aber oder wenn dann noch nur auch schon sehr mehr
immer wieder hier dort heute morgen gestern jahr jahre jahren tag tage
zeit mann frau frauen kinder haus wasser welt leben stadt land buch
bücher wort wörter satz sätze sprache sprachen übersetzung deutsch
deutsche englisch französisch spanisch gut gute schlecht groß große klein
kleine alt alte neu neue schwarz weiß rot blau grün hund hunde katze
katzen ich wir ihr sie wie wo als bis vor zwischen während wegen seit
haben hatte hatten werden wurde wurden können kann müssen muss sollen
soll wollen machen macht gehen geht kommen kommt sehen sieht sagen sagt
sprechen spricht zwei drei vier fünf sechs sieben acht neun zehn
""",
    "es": """
el los las esto esta este estos estas ese esa eso esos esas por para con
cuando cuándo donde dónde porque pero muy menos todo toda todos todas
nada algo alguien alguno alguna siempre nunca ahora aquí allí hoy ayer
mañana año años día días tiempo tiempos hombre hombres mujer mujeres niño
niña niños casa casas agua mundo vida mano manos ciudad ciudades libro
libros palabra palabras oración lengua idioma idiomas traducción traducir
español española inglés inglesa francés alemán bueno buena buenos malo
mala grande grandes pequeño pequeña viejo vieja nuevo nueva negro negra
blanco blanca rojo roja azul verde verdes perro perros gato gata gatos
ser estar es fue hay tiene tienen hace hacen puede pueden debe deben más
también así sólo entre hasta desde sin sobre una unos unas dos tres
cuatro cinco seis siete ocho nueve diez decir dice hablar habla quiero
quiere saber sabe mismo misma otro otra otros otras vez veces bajo según
durante contra cómo qué quién antes
""",
    "it": """
il lo gli uno della dello delle degli dei del nel nella nelle negli sul
sulla tra fra anche ancora adesso oggi ieri domani anno anni giorno
giorni uomo uomini donna donne bambino bambina bambini acqua mondo vita
città libri parola parole lingua lingue traduzione tradurre italiano
italiana inglese francese tedesco spagnolo buono buona cattivo cattiva
grandi piccolo piccola vecchio vecchia nuovi nuove nero nera bianco
bianca rosso rossa blu cane cani gatto gatta gatti essere sono è sarà
questo questa questi queste quello quella quando dove perché ma più
molto molti molte poco tutto tutti tutte senza dopo prima ora non che
chi cosa cose fare fatto vedere andare venire sapere potere volere
dovere parlare parla mai due tre quattro cinque sette otto nove dieci
mare sole luna notte giornata di
""",
    "pt": """
não uma umas uns um isso isto muito muita muitos obrigado obrigada você
vocês ele eles elas nós já ainda sempre ontem amanhã ano anos dias tempo
homem mulher mulheres criança crianças água mão mãos cidade cidades
livro livros palavra palavras língua línguas tradução traduções traduzir
português portuguesa inglês francês alemão bom boa bons boas mau má
pequeno velho velha novo nova preto preta branco branca vermelho vermelha
cão cães coração corações estação então também depois onde quem porquê
com sem sob até fazer fez dizer disse falar fala poder querer quero
coisa coisas vezes mesmo mesma outro outra dois duas quatro sete oito
dez falou noite semana trabalho pessoa pessoas país hoje
""",
    "id": """
yang dan ini itu dengan untuk dari pada adalah tidak akan telah sudah
belum bisa harus juga hanya saya kami kita mereka dia anda satu dua tiga
empat lima enam tujuh delapan sembilan sepuluh tahun hari waktu orang
rumah air dunia hidup tangan kota buku kata kalimat bahasa terjemahan
menerjemahkan inggris indonesia baik buruk besar kecil lama baru hitam
putih merah biru hijau anjing kucing sangat banyak sedikit semua setiap
karena ketika bagaimana apa siapa ke oleh atau jika maka lebih paling
bukan ada punya pergi datang makan minum lihat tahu bilang kerja sekolah
kemarin besok sekarang nanti pagi siang malam minggu bulan negara dalam
""",
    "vi": """
và của là có không được trong cho với này đã sẽ đang người năm ngày giờ
nước nhà sách từ câu tiếng dịch việt tốt xấu lớn nhỏ cũ mới đen trắng đỏ
xanh chó mèo một hai ba bốn sáu bảy tám chín mười rất nhiều ít tất cả vì
khi đâu nào ai gì anh em tôi chúng bạn thế giới cuộc sống thành phố thời
gian ngôn ngữ bản làm đi đến nói biết thấy nghe ăn uống học trường hôm
nay qua sáng trưa tối tuần tháng quốc gia
""",
    # --- Cyrillic ------------------------------------------------------
    "ru": """
это что как для его она они оно мы вы был была было были есть быть
только уже ещё еще или если когда где здесь там тут сейчас сегодня вчера
завтра год года лет день дня дни время времени человек люди женщина
женщины мужчина ребёнок ребенок дети дом дома вода воды мир мира жизнь
жизни рука руки город города книга книги слово слова предложение
предложения язык языка языки перевод перевода русский русская русском
английский английском французский немецкий испанский китайский хорошо
хороший плохо плохой большой большая маленький маленькая старый старая
новый новая чёрный черный белый белая красный красная синий синяя
зелёный зеленый собака собаки кошка кошки кот один одна два две три
четыре пять шесть семь восемь девять десять очень много мало всё все
каждый каждая потому чтобы который которая сказал сказала говорит
видеть видит знать знает идти идёт может можно нужно надо
""",
    "uk": """
це цей ця від він вона вони був була були бути є тільки вже ще або якщо
коли де зараз сьогодні вчора рік року роки час часу людина жінка жінки
чоловік дитина дім світ світу життя місто міста книжка книжки речення
мова мови переклад перекладу українська українською український
англійська англійською добре погано великий велика старий новий чорний
чорна білий біла червоний червона синій зелений зелена кішка кіт чотири
шість сім вісім дуже багато кожен кожна тому щоб який яка
сказав каже бачити знати йти йде можна треба як
""",
    "bg": """
това този тази тези ние вие те съм сме сте има няма само вече още ако
кога къде тук сега днес утре година години денят времето човекът хора
жена дете деца къща свят животът ръка ръката градът книгата дума думи
изречение изречения език езикът езици превод преводът български
българска английски добър добра лошо голям голяма малък малка черен
черна бял бяла червен синьо зелено куче котка котки едно една пет шест
седем осем девет десет малко всеки защото защо който която казва вижда
знае знам ден водата сега сутрин вечер седмица месец работа училище
""",
    "sr": """
ово шта зашто тако већ још када овде сада данас јуче сутра године дан
време човек жене кућа свет живот руке град књига реч реченица језик
преводилац српски енглески добро лоше велики мали стари нови црн црно
бео бели плав зелени пас мачка један једна седам осам веома сваки јер
који која рекао рекла мора хвала молим недеља дана посао школа
мајка отац син ћерка био била било јесте није

""",
    "mk": """
ова ќе веќе куќа куќата јазик јазикот јазици збор зборови зборот многу
малку денес денеска човекот градот градови животот светот денот жената
детето кучето реченицата преводот македонски македонскиот македонска
англиски еден седум осум секој секоја зошто кој мал нов нова бел бела
зелен сакам велат зборува гледа оди дојде живее годината утрово
паричник школо мајката таткото синот ќерката беше бидат
""",
    "be": """
гэта гэты гэтая ён яна яны быў былі ёсць толькі ужо яшчэ ці калі дзе
цяпер сёння учора заўтра гады дзень чалавек жанчына дзіця дзеці вада
жыццё рукі горад кніга кнігі словы сказ гаворка пераклад беларуская
беларускі англійская добры дрэнна вялікі маленькі стары новы чорны белы
чырвоны сіні зялёны сабака адзін тры чатыры пяць вельмі шмат мала кожны
таму які якая казаць ведаць бачыць ісці працаваць дзеля горада тыдзень
месяц праца маці бацька сын дачка
""",
    "kk": """
бұл және үшін бар мен біз сіз олар бір екі үш төрт бес алты жеті жыл күн
уақыт адам әйел бала үй су әлем өмір қол қала кітап сөз сөйлем тіл
аударма қазақ қазақша ағылшын жақсы жаман үлкен кіші ескі жаңа қара ақ
қызыл көк жасыл ит мысық өте көп аз әрбір неге қашан қайда кім болады
апта ай жұмыс мектеп ана әке ұл қыз
""",
    "ky": """
бул жана үчүн жок биз сиз алар бир эки үч беш жети убакыт киши аял
балдар суу дүйнө өмүр кол шаар китеп сүйлөм тил котормо кыргыз англис
жакшы начар чоң кичине эски жаңы кара ак кызыл жашыл мышык абдан эмне
качан кайда ким мага болот жума
""",
    "tg": """
ин инро барои ҳаст нест ман мо шумо онҳо яке ду се чор панҷ шаш ҳафт сол
рӯз вақт одам зан кӯдак хона об ҷаҳон зиндагӣ даст шаҳр китоб калима
ҷумла забон тарҷума тоҷикӣ англисӣ хуб бад калон хурд кӯҳна нав сиёҳ
сафед сурх кабуд сабз саг гурба хеле бисёр кам ҳар чаро кай куҷо кӣ чӣ
ҳафта моҳ кор мактаб модар падар писар духтар
""",
    "mn": """
энэ бол байна биш би бид та тэд нэг хоёр гурав дөрөв тав зургаа долоо
жил өдөр цаг хүн эмэгтэй хүүхэд гэр ус ертөнц амьдрал гар хот ном үг
өгүүлбэр хэл орчуулга монгол англи сайн муу том жижиг хуучин шинэ хар
цагаан улаан хөх ногоон нохой муур маш их бага бүр яагаад хэзээ хаана
хэн юу байсан байгаа хийх явах ирэх долоо?
""",
    # --- Arabic script --------------------------------------------------
    "ar": """
هذا هذه الذي التي كان كانت يكون ليس فقط أيضا إلى على عن مع بعد قبل عند
لكن سنة سنوات يوم أيام وقت رجل امرأة طفل أطفال بيت بيوت ماء عالم حياة يد
مدينة مدن كتاب كتب كلمة كلمات جملة جمل لغة لغات ترجمة يترجم عربي عربية
العربية إنجليزي الإنجليزية فرنسي جيد جيدة سيئ كبير كبيرة صغير صغيرة قديم
قديمة جديد جديدة أسود أبيض أحمر أزرق أخضر كلب كلاب قطة قطط جدا كثير
كثيرا قليل كل لماذا متى أين ماذا هناك هنا اليوم أمس غدا الآن نحن أنت
أنتم هم هي هو في
""",
    "fa": """
این است نیست برای ما شما آنها یک دو سه چهار پنج شش هفت هشت سال روز زمان
مرد زن کودک کودکان خانه آب جهان زندگی دست شهر شهرها کتاب واژه جمله زبان
فارسی انگلیسی ترجمه خوب بد بزرگ کوچک قدیمی جدید سیاه سفید قرمز آبی سبز
سگ گربه خیلی بسیار کم هر چرا کجا که چه من پس پیش تنها اکنون امروز دیروز
فردا مادر پدر پسر دختر می‌شود دارد دارند کرد کردن گفت گفتن دید دیدن رفت
رفتن آمد آمدن در اگر تو بود هفته ماه کار مدرسه
""",
    "ps": """
دا چې دی ده وو یو دوه درې څلور پنځه شپږ اووه اته کال کلونه ورځ ورځې وخت
سړی ښځه ماشوم ماشومان کور اوبه نړۍ ژوند لاس ښار ټکی ټکي جملې ژبه ژبې
ژباړه پښتو انګلیسي ښه بده لوی کوچنی زوړ نوی تور سپین سپینه سور شین زرغون
سپی پیشو ډېر لږ هره ولې کله چېرته څوک څه موږ تاسو هغه هغوی زه زما ستا
کوي وايي کيږي اونۍ میاشت
""",
    "ur": """
یہ ہے ہیں نہیں کے لیے میں ہم آپ وہ ایک تین چار پانچ سات دس دن آدمی عورت
بچہ بچے گھر پانی دنیا ہاتھ شہر لفظ جملہ زبانیں اردو انگریزی ترجمہ اچھا
اچھی برا بڑا بڑی چھوٹا چھوٹی پرانا پرانی نیا نئی کالا لال نیلا ہرا کتا
کتے بلی بہت تھوڑا کیوں کب کہاں کون کیا کی کا کو نے سے پر تھا تھی تھے ہو
ہونا کرنا کرتا کرتی گیا گئی آیا آئی دیا لیا ماں باپ بیٹا بیٹی برس کل آج
رات ہفتہ مہینہ کام اسکول کتابیں دونوں سب کچھ اور لیکن جب تب یہاں وہاں
بھی پھر آٹھ
""",
    "sd": """
آهي ناهي اسان توهان هڪ ٻه ٽي ڇهه ست اٺ ڏهه ڏينهن ماڻهو ٻار پاڻي دنيا
زندگي هٿ ڪتاب جملو ٻولي ترجمو سنڌي انگريزي سٺو خراب وڏو ننڍو پراڻو نئون
ڪارو اڇو ڳاڙهو نيرو سائو ڪتو ٻلي گهڻو ٿورو ڇو ڪڏهن ڪٿي ڪير ڇا اڄ سڀاڻي
هفتو مهينو ڪم اسڪول ماءُ پيءُ پٽ ڌيءَ هئا هوندو ڪندو ويندو اچي وڃي
""",
    # --- Devanagari ------------------------------------------------------
    "hi": """
यह है हैं नहीं के का की को ने से पर लिए में हम आप वे वह एक दो तीन चार
पांच छह सात आठ नौ दस साल दिन समय आदमी औरत बच्चा बच्चे घर पानी दुनिया
जीवन हाथ शहर किताब किताबें शब्द वाक्य भाषा भाषाएं अनुवाद हिंदी अंग्रेजी
अच्छा अच्छी बुरा बड़ा बड़ी छोटा छोटी पुराना पुरानी नया नयी काला काली सफेद
लाल नीला नीली हरा हरी कुत्ता कुत्ते बिल्ली बहुत थोड़ा हर क्यों कब कहाँ
कौन क्या और लेकिन अगर तो भी फिर जब तब यहाँ वहाँ आज कल सुबह रात सप्ताह
महीना काम स्कूल माता पिता बेटा बेटी था थी थे होना करना करता करती गया गयी
आया आयी दिया लिया कहा बोला देखा सुना खाना पीना पढ़ना लिखना
""",
    "mr": """
आहे आहेत नाही साठी आम्ही तुम्ही त्यांनी त्याने तिने दोन पाच सहा वर्षे
दिवस वेळ माणूस माणसे बाई मूल मुले पाणी जग हात पुस्तक पुस्तके मराठी
इंग्रजी भाषांतर चांगले चांगला वाईट मोठा मोठी लहान जुना जुनी नवीन काळा
काळी पांढरा तांबडा निळा हिरवा कुत्रा मांजर खूप कमी प्रत्येक केव्हा कुठे
कोण काय आणि पण परंतु मग जेव्हा तेव्हा येथे तेथे उद्या सकाळी रात्री
आठवडा महिना शाळा आई वडील मुलगा मुलगी होते करतो गेला आला दिले घेतले
म्हणाला पाहिले ऐकले खाणे पिणे वाचणे लिहिणे तर
""",
    "ne": """
यो हो छ छन् छैन थियो थिए हुन्छ गर्छ गर्यो भयो लागि हामी तिमी तपाईं उनी
उनीहरू एउटा दुई पाँच वर्ष हप्ता मानिस मान्छे महिला बालक संसार जिन्दगी
खुट्टा सहर पुस्तकहरू शब्दहरू नेपाली अङ्ग्रेजी उल्था राम्रो नराम्रो ठूलो
सानो पुरानो नयाँ कालो सेतो रातो निलो हरियो कुकुर बिरालो धेरै थोरै हरेक
किन कहिले कता कसले अनि यहीँ त्यहाँ हिजो भोलि बिहान स्कुल आमा बुबा छोरा
छोरी गरेको भएको आयो गयो खायो देख्यो सुन्यो पढ्यो लेख्यो
""",
}

GROUPS = {
    "latin": ["en", "fr", "de", "es", "it", "pt", "id", "vi"],
    "cyrillic": ["ru", "uk", "bg", "sr", "mk", "be", "kk", "ky", "tg", "mn"],
    "arabic": ["ar", "fa", "ps", "ur", "sd"],
    "devanagari": ["hi", "mr", "ne"],
}


def main():
    toks = {}
    ok = True
    for code, blob in WORDS.items():
        words = []
        seen = set()
        for w in blob.split():
            w = w.strip().lower().rstrip("?")
            if not w:
                continue
            if w in seen:
                continue
            seen.add(w)
            words.append(w)
        toks[code] = words

    for group, codes in GROUPS.items():
        owner = {}
        for code in codes:
            for w in toks[code]:
                if w in owner:
                    print(f"CLASH [{group}]: {w!r} in both {owner[w]} and {code}")
                    ok = False
                else:
                    owner[w] = code
    if not ok:
        sys.exit(1)

    OUT.mkdir(parents=True, exist_ok=True)
    for code, words in toks.items():
        lines = []
        for i, w in enumerate(words):
            freq = max(12, int(250_000 / (i + 2) ** 0.85))
            lines.append(f"{w}\t{freq}")
        (OUT / f"{code}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{code}: {len(words)} tokens")


if __name__ == "__main__":
    main()
