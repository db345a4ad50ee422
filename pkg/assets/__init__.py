from dagster import (
    AssetSelection,
    DefaultScheduleStatus,
    Definitions,
    ScheduleDefinition,
    define_asset_job,
)

from .campanhas import (
    campanha_cor21_contraexemplo,
    campanha_thm21,
    campanhas_classicas,
    campanhas_refinadas,
    exportar_campanhas,
)
from .checks import check_classicas_sem_testemunhas, check_determinismo_cor21

# --- Jobs (agrupamentos de assets para schedules) ---

campanhas_job = define_asset_job(
    name="campanhas_job",
    selection=AssetSelection.groups("falsificacao", "exportacao"),
)

# --- Schedules ---

campanhas_schedule = ScheduleDefinition(
    job=campanhas_job,
    cron_schedule="0 2 * * *",  # diariamente às 02:00
    default_status=DefaultScheduleStatus.RUNNING,
)

# --- Definitions (ponto de entrada do Dagster) ---

defs = Definitions(
    assets=[
        campanha_thm21,
        campanha_cor21_contraexemplo,
        campanhas_refinadas,
        campanhas_classicas,
        exportar_campanhas,
    ],
    schedules=[campanhas_schedule],
    asset_checks=[
        check_classicas_sem_testemunhas,
        check_determinismo_cor21,
    ],
)
