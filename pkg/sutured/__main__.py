from sutured.cli import main

main()
