# scalepop/core/config.py
import os
from dotenv import load_dotenv

load_dotenv()

# Каталог результатов по умолчанию (если не задан флагом --out)
SCALEPOP_OUT = os.getenv("SCALEPOP_OUT", "output")

# Размер пула для режима --sweep
SWEEP_WORKERS = int(os.getenv("SCALEPOP_WORKERS", "0")) or None

# Стратегии популяции и режимы торговца
STRATEGIES = ("independent", "bm", "rm", "bm_rm")
MERCHANT_MODES = ("argmax", "weighted")
SYNTH_MODELS = ("coin", "gaussian")

# Встроенные значения по умолчанию для SimConfig
DEFAULT_SIM = {
    "n_tf": 1000,
    "u_born": 10,
    "h": 1,
    "l_min": 1,
    "l_max": 100_000,
    "strategy": "independent",
    "mutation_sigma": 3000.0,
    "merchant_mode": "argmax",
    "seed": 0,
    "sample_every": 1000,
}

# Пресеты с параметрами численного эксперимента (N_TF=1000, u_born=10, σ=3000)
PRESETS = {
    "paper-h1": {"n_tf": 1000, "u_born": 10, "l_min": 1, "l_max": 100_000, "mutation_sigma": 3000.0, "h": 1},
    "paper-h100": {"n_tf": 1000, "u_born": 10, "l_min": 1, "l_max": 100_000, "mutation_sigma": 3000.0, "h": 100},
    "paper-h1000": {"n_tf": 1000, "u_born": 10, "l_min": 1, "l_max": 100_000, "mutation_sigma": 3000.0, "h": 1000},
}

# Диапазоны аппроксимации эффективных индексов по стратегиям
LIFETIME_FIT_RANGES = {
    "independent": (100.0, 10_000.0),
    "bm": (17.0, 10_000.0),
    "rm": (100.0, 10_000.0),
    "bm_rm": (100.0, 10_000.0),
}
DEATHRATE_FIT_RANGES = {
    "independent": (1.0, 11.27),
    "bm": (1.0, 11.64),
    "rm": (1.0, 11.75),
    "bm_rm": (1.0, 11.75),
}

# Опубликованные коридоры точности предсказания (PA) по горизонту h
PA_BANDS = {
    1: (0.52, 0.55),
    100: (0.5005, 0.503),
    1000: (0.50005, 0.501),
}

# Длина переходного режима t₁ в пресетах
PRESET_T1 = 9_000_000

# Логарифмическое биннирование
BINS_PER_DECADE = 10

# Логирование
LOGGING_CONFIG = {
    "level": os.getenv("SCALEPOP_LOG_LEVEL", "INFO"),
    "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    "filename": os.getenv("SCALEPOP_LOG_FILE", "logs/scalepop.log"),
    "filemode": "a",
}
