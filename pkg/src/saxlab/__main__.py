from saxlab.cli import main
main()
